#include "adversim/map_library.hpp"

#include "adversim/error.hpp"

namespace adversim {

MapLibrary::MapLibrary(std::vector<MapModel> maps) {
  for (auto& m : maps) add(std::move(m));
}

void MapLibrary::add(MapModel map) {
  const std::string id = map.id();
  maps_.insert_or_assign(id, std::move(map));
}

const MapModel& MapLibrary::at(const std::string& id) const {
  const auto it = maps_.find(id);
  if (it == maps_.end()) throw Error(ErrorCode::kInvalidArgument, "unknown map '" + id + "'");
  return it->second;
}

std::vector<std::string> MapLibrary::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : maps_) out.push_back(id);
  return out;
}

}  // namespace adversim
