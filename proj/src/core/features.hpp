#ifndef AFFECT_CORE_FEATURES_HPP
#define AFFECT_CORE_FEATURES_HPP

#include <string>
#include <vector>

namespace affect {

// Per-segment feature vectors with named columns.
struct FeatureMatrix {
    std::vector<std::string> schema;
    std::vector<std::vector<double>> rows;
    std::string source_id;

    std::size_t dim() const { return schema.size(); }
    std::size_t row_count() const { return rows.size(); }
};

void validate_features(const FeatureMatrix& m);

// CSV: header = schema, one row per vector, full-precision decimal text.
void save_feature_csv(const FeatureMatrix& m, const std::string& path);
FeatureMatrix load_feature_csv(const std::string& path);

// Row-wise concatenation of columns (same row count).
FeatureMatrix hcat(const FeatureMatrix& a, const FeatureMatrix& b);

// Stacks rows (same schema).
void append_rows(FeatureMatrix& dst, const FeatureMatrix& src);

} // namespace affect

#endif
