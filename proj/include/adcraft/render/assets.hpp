#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adcraft/image.hpp"
#include "adcraft/layout/resolve.hpp"

namespace adcraft::render {

struct Asset {
    Image image;
    /// Encoded PNG bytes; original file bytes when loaded from disk so
    /// embedded data URIs are stable across libpng versions.
    std::vector<std::uint8_t> png;
    std::string filename;
};

/// Images referenced by a blueprint, keyed by asset id ("background", "logo").
class AssetStore {
public:
    void add(const std::string& id, Image image, std::string filename);
    void add_file(const std::string& id, const std::filesystem::path& path);

    bool contains(const std::string& id) const { return assets_.count(id) > 0; }
    const Asset* find(const std::string& id) const;
    /// Throws MissingAsset.
    const Asset& require(const std::string& id) const;

    layout::AssetSizes sizes() const;

private:
    std::map<std::string, Asset> assets_;
};

} // namespace adcraft::render
