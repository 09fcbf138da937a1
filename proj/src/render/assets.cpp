#include "adcraft/render/assets.hpp"

#include "adcraft/errors.hpp"

namespace adcraft::render {

void AssetStore::add(const std::string& id, Image image, std::string filename)
{
    Asset a;
    a.png = encode_png(image);
    a.image = std::move(image);
    a.filename = std::move(filename);
    assets_[id] = std::move(a);
}

void AssetStore::add_file(const std::string& id, const std::filesystem::path& path)
{
    Asset a;
    a.png = read_file_bytes(path);
    a.image = decode_png(a.png);
    a.filename = path.filename().string();
    assets_[id] = std::move(a);
}

const Asset* AssetStore::find(const std::string& id) const
{
    auto it = assets_.find(id);
    return it == assets_.end() ? nullptr : &it->second;
}

const Asset& AssetStore::require(const std::string& id) const
{
    if (const Asset* a = find(id))
        return *a;
    throw MissingAsset("asset \"" + id + "\" is not available");
}

layout::AssetSizes AssetStore::sizes() const
{
    layout::AssetSizes out;
    for (const auto& [id, a] : assets_)
        out[id] = {a.image.width(), a.image.height()};
    return out;
}

} // namespace adcraft::render
