#include "core/manifest.hpp"

#include <algorithm>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace affect {

std::vector<std::string> CorpusManifest::labels() const {
    std::set<std::string> s;
    for (const auto& e : entries) s.insert(e.label);
    return {s.begin(), s.end()};
}

std::vector<std::string> CorpusManifest::speakers() const {
    std::set<std::string> s;
    for (const auto& e : entries) s.insert(e.speaker);
    return {s.begin(), s.end()};
}

void validate_manifest(const CorpusManifest& manifest, bool for_classification) {
    if (manifest.entries.empty())
        throw Error(Status::invalid_argument, "empty manifest");
    std::set<std::string> paths;
    for (const auto& e : manifest.entries) {
        if (e.path.empty() || e.label.empty() || e.speaker.empty())
            throw Error(Status::invalid_argument,
                        "manifest entry with empty path, label or speaker");
        if (!paths.insert(e.path).second)
            throw Error(Status::invalid_argument, "duplicate manifest path: " + e.path);
    }
    if (for_classification && manifest.labels().size() < 2)
        throw Error(Status::invalid_argument,
                    "classification needs at least 2 distinct labels");
}

CorpusManifest load_manifest(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_csv_line(lines[0]) !=
                             std::vector<std::string>{"path", "label", "speaker"})
        throw Error(Status::bad_format, path + ": expected header path,label,speaker");
    CorpusManifest manifest;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3)
            throw Error(Status::bad_format,
                        path + ": row " + std::to_string(i) + " needs 3 fields");
        manifest.entries.push_back({fields[0], fields[1], fields[2]});
    }
    validate_manifest(manifest, false);
    return manifest;
}

void save_manifest(const CorpusManifest& manifest, const std::string& path) {
    std::vector<std::string> lines{"path,label,speaker"};
    for (const auto& e : manifest.entries)
        lines.push_back(join_csv({e.path, e.label, e.speaker}));
    write_lines(path, lines);
}

} // namespace affect
