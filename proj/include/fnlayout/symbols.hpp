#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fnlayout/graph.hpp"

namespace fnlayout {

// Dense FunctionId <-> external symbol name. Names only live at the I/O
// boundary; everything inside works on ids.
class SymbolTable {
 public:
  FunctionId intern(std::string_view name);
  std::optional<FunctionId> find(std::string_view name) const;
  const std::string& name(FunctionId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, FunctionId> ids_;
};

}  // namespace fnlayout
