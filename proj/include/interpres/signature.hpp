#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace interpres {

using Tuple = std::vector<int>;

// Relational signature. Function symbols are not supported; a function is
// given by its graph relation.
class Signature {
 public:
  Signature() = default;

  // Throws SignatureError on duplicate names, arity < 1, malformed names or
  // names containing "__" (reserved for translated variables).
  Signature& add_relation(const std::string& name, int arity);
  Signature& add_constant(const std::string& name);

  std::optional<int> arity(std::string_view relation) const;
  bool has_relation(std::string_view name) const { return relations_.count(name) > 0; }
  bool has_constant(std::string_view name) const { return constants_.count(name) > 0; }

  const std::map<std::string, int, std::less<>>& relations() const { return relations_; }
  const std::set<std::string, std::less<>>& constants() const { return constants_; }

  bool relational() const { return constants_.empty(); }

  // Same relations, constants replaced by the given names.
  Signature with_constants(const std::vector<std::string>& names) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int, std::less<>> relations_;
  std::set<std::string, std::less<>> constants_;
};

bool is_identifier(std::string_view name);

}  // namespace interpres
