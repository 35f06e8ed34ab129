#include "core/features.hpp"

#include <cmath>
#include <cstdlib>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace affect {

void validate_features(const FeatureMatrix& m) {
    if (m.schema.empty())
        throw Error(Status::invalid_argument, "feature matrix has empty schema");
    for (const auto& row : m.rows) {
        if (row.size() != m.schema.size())
            throw Error(Status::invalid_argument,
                        "feature row length " + std::to_string(row.size()) +
                            " != schema length " + std::to_string(m.schema.size()));
        for (double v : row)
            if (!std::isfinite(v))
                throw Error(Status::invalid_argument, "non-finite feature value");
    }
}

void save_feature_csv(const FeatureMatrix& m, const std::string& path) {
    validate_features(m);
    std::vector<std::string> lines;
    lines.reserve(m.rows.size() + 1);
    lines.push_back(join_csv(m.schema));
    for (const auto& row : m.rows) {
        std::vector<std::string> fields;
        fields.reserve(row.size());
        for (double v : row) fields.push_back(format_double(v));
        lines.push_back(join_csv(fields));
    }
    write_lines(path, lines);
}

FeatureMatrix load_feature_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw Error(Status::bad_format, path + ": empty feature file");
    FeatureMatrix m;
    m.schema = split_csv_line(lines[0]);
    m.source_id = path;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != m.schema.size())
            throw Error(Status::bad_format,
                        path + ": row " + std::to_string(i) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(m.schema.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0')
                throw Error(Status::bad_format,
                            path + ": non-numeric value '" + f + "' in row " +
                                std::to_string(i));
            row.push_back(v);
        }
        m.rows.push_back(std::move(row));
    }
    validate_features(m);
    return m;
}

FeatureMatrix hcat(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.row_count() != b.row_count())
        throw Error(Status::invalid_argument, "hcat: row count mismatch");
    FeatureMatrix out;
    out.schema = a.schema;
    out.schema.insert(out.schema.end(), b.schema.begin(), b.schema.end());
    out.source_id = a.source_id;
    out.rows.resize(a.row_count());
    for (std::size_t i = 0; i < a.row_count(); ++i) {
        out.rows[i] = a.rows[i];
        out.rows[i].insert(out.rows[i].end(), b.rows[i].begin(), b.rows[i].end());
    }
    return out;
}

void append_rows(FeatureMatrix& dst, const FeatureMatrix& src) {
    if (dst.schema.empty()) {
        dst = src;
        return;
    }
    if (dst.schema != src.schema)
        throw Error(Status::invalid_argument, "append_rows: schema mismatch");
    dst.rows.insert(dst.rows.end(), src.rows.begin(), src.rows.end());
}

} // namespace affect
