#include "boksim/kanalysis.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::kanalysis {

using nlohmann::json;

std::uint64_t ChordMatrix::total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts) {
        for (auto c : row) {
            sum += c;
        }
    }
    return sum;
}

ChordMatrix chord_matrix(std::span<const simrank::Ranking> rankings, const corpus::Corpus& corpus,
                         std::size_t k) {
    ChordMatrix m;
    m.k = k;
    m.kas.assign(corpus.ka_codes().begin(), corpus.ka_codes().end());
    m.counts.assign(m.kas.size(), std::vector<std::uint64_t>(m.kas.size(), 0));
    std::map<std::string, std::size_t, std::less<>> ka_index;
    for (std::size_t i = 0; i < m.kas.size(); ++i) {
        ka_index.emplace(m.kas[i], i);
    }
    auto ka_of = [&](std::string_view id) {
        const auto* topic = corpus.find(id);
        if (topic == nullptr) {
            throw ValidationError("topic '" + std::string(id) + "' has no knowledge area in corpus");
        }
        return ka_index.find(topic->knowledge_area)->second;
    };
    for (const auto& ranking : rankings) {
        auto head = ka_of(ranking.query_id);
        const auto n = std::min(k, ranking.entries.size());
        for (std::size_t i = 0; i < n; ++i) {
            ++m.counts[head][ka_of(ranking.entries[i].id)];
        }
    }
    return m;
}

KaSummary ka_summary(const ChordMatrix& matrix) {
    KaSummary s;
    const auto n = matrix.kas.size();
    for (std::size_t i = 0; i < n; ++i) {
        KaSummaryRow row{matrix.kas[i], matrix.counts[i][i], 0, 0};
        for (std::size_t j = 0; j < n; ++j) {
            row.heads += matrix.counts[i][j];
            row.tails += matrix.counts[j][i];
        }
        s.rows.push_back(row);
    }
    auto argmax = [&](auto field) {
        std::string best;
        std::uint64_t best_value = 0;
        for (const auto& row : s.rows) {
            if (best.empty() || row.*field > best_value) {
                best = row.ka;
                best_value = row.*field;
            }
        }
        return best;
    };
    s.intra_argmax = argmax(&KaSummaryRow::intra);
    s.head_argmax = argmax(&KaSummaryRow::heads);
    s.tail_argmax = argmax(&KaSummaryRow::tails);
    return s;
}

std::string ka_summary_to_csv(const KaSummary& summary) {
    std::string out = "ka,intra,heads,tails\n";
    for (const auto& row : summary.rows) {
        out += io::csv_escape(row.ka) + ',' + std::to_string(row.intra) + ',' +
               std::to_string(row.heads) + ',' + std::to_string(row.tails) + '\n';
    }
    return out;
}

std::string chords_to_json(const ChordMatrix& matrix) {
    nlohmann::ordered_json out;
    out["k"] = matrix.k;
    out["kas"] = matrix.kas;
    out["counts"] = matrix.counts;
    return out.dump() + "\n";
}

namespace {

void check_shape(const ChordMatrix& m) {
    if (m.counts.size() != m.kas.size()) {
        throw ValidationError("chord matrix has " + std::to_string(m.counts.size()) +
                              " rows for " + std::to_string(m.kas.size()) + " knowledge areas");
    }
    for (const auto& row : m.counts) {
        if (row.size() != m.kas.size()) {
            throw ValidationError("chord matrix row has the wrong length");
        }
    }
}

std::uint64_t parse_count(std::string_view text) {
    double v = io::parse_double(text, "chord count");
    if (v < 0.0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
        throw ValidationError("chord count must be a non-negative integer: " + std::string(text));
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace

ChordMatrix parse_chords_json(std::string_view text) {
    ChordMatrix m;
    try {
        json doc = json::parse(text.begin(), text.end());
        m.k = doc.at("k").get<std::size_t>();
        m.kas = doc.at("kas").get<std::vector<std::string>>();
        m.counts = doc.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed chord JSON: ") + e.what());
    }
    check_shape(m);
    return m;
}

std::string chords_to_csv(const ChordMatrix& matrix) {
    std::string out = "k=" + std::to_string(matrix.k);
    for (const auto& ka : matrix.kas) {
        out += ',' + io::csv_escape(ka);
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.kas.size(); ++i) {
        out += io::csv_escape(matrix.kas[i]);
        for (auto c : matrix.counts[i]) {
            out += ',' + std::to_string(c);
        }
        out += '\n';
    }
    return out;
}

ChordMatrix parse_chords_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : io::split(text, '\n')) {
        if (!io::trim(line).empty()) {
            rows.push_back(io::csv_parse_line(line));
        }
    }
    if (rows.empty() || rows[0].empty() || !rows[0][0].starts_with("k=")) {
        throw ValidationError("chord CSV must start with a 'k=<k>' header cell");
    }
    ChordMatrix m;
    m.k = static_cast<std::size_t>(parse_count(std::string_view(rows[0][0]).substr(2)));
    m.kas.assign(rows[0].begin() + 1, rows[0].end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != m.kas.size() + 1 || rows[i][0] != m.kas[m.counts.size()]) {
            throw ValidationError("chord CSV row " + std::to_string(i) + " does not match header");
        }
        std::vector<std::uint64_t> counts;
        for (std::size_t j = 1; j < rows[i].size(); ++j) {
            counts.push_back(parse_count(rows[i][j]));
        }
        m.counts.push_back(std::move(counts));
        if (m.counts.size() > m.kas.size()) {
            break;
        }
    }
    check_shape(m);
    return m;
}

std::string chords_to_svg(const ChordMatrix& matrix) {
    auto summary = ka_summary(matrix);
    std::uint64_t peak = 1;
    for (const auto& row : summary.rows) {
        peak = std::max({peak, row.intra, row.heads, row.tails});
    }
    constexpr int bar = 14;
    constexpr int group_gap = 18;
    constexpr int chart_height = 200;
    constexpr int margin = 40;
    const int group_width = 3 * bar + group_gap;
    const int width = margin * 2 + group_width * static_cast<int>(summary.rows.size());
    const int height = chart_height + margin * 2;
    const char* colors[3] = {"#4c72b0", "#dd8452", "#55a868"};
    const char* names[3] = {"intra", "heads", "tails"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <title>Knowledge-area similarity@" << matrix.k << "</title>\n";
    svg << "  <line x1=\"" << margin << "\" y1=\"" << margin + chart_height << "\" x2=\""
        << width - margin << "\" y2=\"" << margin + chart_height << "\" stroke=\"black\"/>\n";
    for (int s = 0; s < 3; ++s) {
        svg << "  <rect x=\"" << margin + s * 70 << "\" y=\"8\" width=\"10\" height=\"10\" fill=\""
            << colors[s] << "\"/><text x=\"" << margin + s * 70 + 14
            << "\" y=\"17\" font-size=\"11\">" << names[s] << "</text>\n";
    }
    for (std::size_t g = 0; g < summary.rows.size(); ++g) {
        const auto& row = summary.rows[g];
        const int x0 = margin + static_cast<int>(g) * group_width + group_gap / 2;
        svg << "  <g class=\"ka\" data-ka=\"" << row.ka << "\">\n";
        std::uint64_t values[3] = {row.intra, row.heads, row.tails};
        for (int s = 0; s < 3; ++s) {
            const int h = static_cast<int>(static_cast<double>(values[s]) /
                                           static_cast<double>(peak) * chart_height);
            svg << "    <rect class=\"" << names[s] << "\" x=\"" << x0 + s * bar << "\" y=\""
                << margin + chart_height - h << "\" width=\"" << bar - 2 << "\" height=\"" << h
                << "\" fill=\"" << colors[s] << "\"><title>" << row.ka << ' ' << names[s] << ": "
                << values[s] << "</title></rect>\n";
        }
        svg << "    <text x=\"" << x0 + bar << "\" y=\"" << margin + chart_height + 16
            << "\" font-size=\"12\">" << row.ka << "</text>\n";
        svg << "  </g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_chords(const ChordMatrix& matrix, ChordFormat format) {
    switch (format) {
        case ChordFormat::csv: return chords_to_csv(matrix);
        case ChordFormat::json: return chords_to_json(matrix);
        case ChordFormat::plot: return chords_to_svg(matrix);
    }
    return {};
}

}  // namespace boksim::kanalysis
