#ifndef AFFECT_CORE_MANIFEST_HPP
#define AFFECT_CORE_MANIFEST_HPP

#include <string>
#include <vector>

namespace affect {

struct ManifestEntry {
    std::string path;
    std::string label;
    std::string speaker;
};

// Labeled WAV tree: unique paths, nonempty labels and speaker ids.
struct CorpusManifest {
    std::vector<ManifestEntry> entries;

    std::vector<std::string> labels() const;   // sorted unique
    std::vector<std::string> speakers() const; // sorted unique
};

void validate_manifest(const CorpusManifest& manifest, bool for_classification);

// CSV with header `path,label,speaker`.
CorpusManifest load_manifest(const std::string& path);
void save_manifest(const CorpusManifest& manifest, const std::string& path);

} // namespace affect

#endif
