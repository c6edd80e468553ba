#include "boksim/embed.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::embed {

bool DocVector::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
}

void check_doc_vector(const DocVector& v) {
    if (v.values.empty()) {
        throw ValidationError("document vector has dimension 0");
    }
    for (double x : v.values) {
        if (!std::isfinite(x)) {
            throw ValidationError("document vector has a non-finite component");
        }
    }
}

TfidfModel fit_tfidf(std::span<const TokenStream> docs) {
    if (docs.empty()) {
        throw ValidationError("TF-IDF needs at least one document");
    }
    std::map<std::string, std::size_t, std::less<>> df;
    for (const auto& doc : docs) {
        std::set<std::string_view> seen(doc.tokens.begin(), doc.tokens.end());
        for (auto tok : seen) {
            auto it = df.find(tok);
            if (it == df.end()) {
                df.emplace(std::string(tok), 1);
            } else {
                ++it->second;
            }
        }
    }
    TfidfModel model;
    model.doc_count = docs.size();
    const double n = static_cast<double>(docs.size());
    std::size_t column = 0;
    for (const auto& [token, count] : df) {
        model.vocabulary.emplace(token, column++);
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return model;
}

Eigen::VectorXd tfidf_column(const TfidfModel& model, const TokenStream& doc) {
    Eigen::VectorXd column = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.vocab_size()));
    for (const auto& tok : doc.tokens) {
        auto it = model.vocabulary.find(tok);
        if (it != model.vocabulary.end()) {
            column(static_cast<Eigen::Index>(it->second)) += model.idf[it->second];
        }
    }
    double norm = column.norm();
    if (norm > 0.0) {
        column /= norm;
    }
    return column;
}

DocVector embed_tfidf(const TfidfModel& model, const TokenStream& doc) {
    Eigen::VectorXd column = tfidf_column(model, doc);
    return DocVector{"tfidf", std::vector<double>(column.begin(), column.end())};
}

void VectorTable::add(std::string token, std::span<const double> values) {
    if (dim_ == 0) {
        throw ValidationError("vector table dimension must be positive");
    }
    if (values.size() != dim_) {
        throw ValidationError("vector for '" + token + "' has " + std::to_string(values.size()) +
                              " components, expected " + std::to_string(dim_));
    }
    if (index_.count(token) != 0) {
        throw ValidationError("duplicate token '" + token + "' in vector table");
    }
    index_.emplace(token, tokens_.size());
    tokens_.push_back(std::move(token));
    data_.insert(data_.end(), values.begin(), values.end());
}

std::span<const double> VectorTable::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) {
        return {};
    }
    return std::span<const double>(data_).subspan(it->second * dim_, dim_);
}

VectorTable parse_vector_table(std::string_view text, std::string_view source) {
    VectorTable table;
    std::size_t line_no = 0;
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (io::trim(line).empty()) {
            continue;
        }
        std::string ctx = std::string(source) + ":" + std::to_string(line_no);
        auto fields = io::split(line, ' ');
        fields.erase(std::remove(fields.begin(), fields.end(), std::string()), fields.end());
        if (fields.size() < 2) {
            throw ValidationError(ctx + ": expected a token followed by components");
        }
        values.clear();
        for (std::size_t i = 1; i < fields.size(); ++i) {
            values.push_back(io::parse_double(fields[i], ctx));
        }
        if (table.dim() == 0) {
            table = VectorTable(values.size());
        }
        if (values.size() != table.dim()) {
            throw ValidationError(ctx + ": dimension " + std::to_string(values.size()) +
                                  " differs from " + std::to_string(table.dim()));
        }
        try {
            table.add(fields[0], values);
        } catch (const ValidationError& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
    }
    if (table.size() == 0) {
        throw ValidationError(std::string(source) + ": no vectors");
    }
    return table;
}

VectorTable load_vector_table(const std::filesystem::path& path) {
    return parse_vector_table(io::read_file(path), path.string());
}

std::string format_vector_table(std::span<const std::string> ids,
                                std::span<const DocVector> vectors) {
    if (ids.size() != vectors.size()) {
        throw Error("format_vector_table: ids and vectors differ in length");
    }
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i];
        for (double x : vectors[i].values) {
            out += ' ';
            out += io::format_double(x);
        }
        out += '\n';
    }
    return out;
}

DocVector embed_avg(const VectorTable& table, const TokenStream& doc, AvgWarnings* warnings) {
    DocVector out{"avg", std::vector<double>(table.dim(), 0.0)};
    std::size_t found = 0;
    for (const auto& tok : doc.tokens) {
        auto vec = table.find(tok);
        if (vec.empty()) {
            if (warnings) {
                ++warnings->oov_tokens;
            }
            continue;
        }
        for (std::size_t i = 0; i < vec.size(); ++i) {
            out.values[i] += vec[i];
        }
        ++found;
    }
    if (found == 0) {
        if (warnings) {
            ++warnings->all_oov_docs;
        }
        return out;
    }
    for (double& x : out.values) {
        x /= static_cast<double>(found);
    }
    return out;
}

}  // namespace boksim::embed
