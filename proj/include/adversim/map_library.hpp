#pragma once

#include "adversim/map_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace adversim {

/// Maps keyed by id, so scenarios can resolve their map_id.
class MapLibrary {
 public:
  MapLibrary() = default;
  explicit MapLibrary(std::vector<MapModel> maps);

  void add(MapModel map);
  /// Throws Error(kInvalidArgument) for an unknown id.
  const MapModel& at(const std::string& id) const;
  bool contains(const std::string& id) const { return maps_.count(id) != 0; }
  std::vector<std::string> ids() const;
  std::size_t size() const { return maps_.size(); }

 private:
  std::map<std::string, MapModel> maps_;
};

}  // namespace adversim
