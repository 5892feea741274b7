#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symdio/error.hpp"

namespace symdio {

/// What a variable stands for in the constructions.
enum class VarKind {
  form,       // x_i, the unknowns of the equation
  pencil,     // t
  point,      // a, b (or a_i) of the first primitive family
  unknown,    // c, d of the second primitive family
  reduction,  // c_j, d_j introduced by the quadruple substitution
};

struct VarTag {
  VarKind kind = VarKind::form;
  // form: 1-based index; point/unknown: 0 = a/c, 1 = b/d;
  // reduction: 2*(j-1) for c_j and 2*(j-1)+1 for d_j.
  unsigned index = 0;

  friend bool operator==(const VarTag&, const VarTag&) = default;
};

inline VarTag form_var(unsigned i) { return {VarKind::form, i}; }
inline VarTag pencil_var() { return {VarKind::pencil, 0}; }
inline VarTag param_a() { return {VarKind::point, 0}; }
inline VarTag param_b() { return {VarKind::point, 1}; }
inline VarTag unknown_c() { return {VarKind::unknown, 0}; }
inline VarTag unknown_d() { return {VarKind::unknown, 1}; }
inline VarTag reduction_c(unsigned step) { return {VarKind::reduction, 2 * (step - 1)}; }
inline VarTag reduction_d(unsigned step) { return {VarKind::reduction, 2 * (step - 1) + 1}; }

inline std::string var_name(const VarTag& tag) {
  switch (tag.kind) {
    case VarKind::form:
      return "x" + std::to_string(tag.index);
    case VarKind::pencil:
      return "t";
    case VarKind::point:
      return tag.index == 0 ? "a" : tag.index == 1 ? "b" : "a" + std::to_string(tag.index);
    case VarKind::unknown:
      return tag.index == 0 ? "c" : tag.index == 1 ? "d" : "c" + std::to_string(tag.index);
    case VarKind::reduction:
      return (tag.index % 2 == 0 ? "c" : "d") + std::to_string(tag.index / 2 + 1);
  }
  return "?";
}

/// Inverse of var_name for the parameter names that appear in solution files.
inline VarTag parse_param_name(const std::string& name) {
  if (name == "a") return param_a();
  if (name == "b") return param_b();
  if (name == "c") return unknown_c();
  if (name == "d") return unknown_d();
  if (name == "t") return pencil_var();
  if (name.size() >= 2 && (name[0] == 'c' || name[0] == 'd' || name[0] == 'x')) {
    try {
      std::size_t used = 0;
      unsigned long j = std::stoul(name.substr(1), &used);
      if (used + 1 == name.size() && j >= 1) {
        if (name[0] == 'x') return form_var(static_cast<unsigned>(j));
        return name[0] == 'c' ? reduction_c(static_cast<unsigned>(j))
                              : reduction_d(static_cast<unsigned>(j));
      }
    } catch (const std::exception&) {
    }
  }
  throw usage_error("UnknownParameter", "unrecognized parameter name '" + name + "'");
}

/// Ordered ambient variable list; position i names variable i of a Poly.
class VarList {
 public:
  VarList() = default;
  explicit VarList(std::vector<VarTag> tags) : tags_(std::move(tags)) {
    for (std::size_t i = 0; i < tags_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (tags_[i] == tags_[j])
          throw usage_error("DuplicateVariable", "variable " + var_name(tags_[i]) + " repeated");
  }

  static VarList form_vars(unsigned n) {
    std::vector<VarTag> tags;
    for (unsigned i = 1; i <= n; ++i) tags.push_back(form_var(i));
    return VarList(std::move(tags));
  }

  std::size_t size() const { return tags_.size(); }
  const VarTag& operator[](std::size_t i) const { return tags_[i]; }
  const std::vector<VarTag>& tags() const { return tags_; }

  std::optional<std::size_t> find(const VarTag& tag) const {
    for (std::size_t i = 0; i < tags_.size(); ++i)
      if (tags_[i] == tag) return i;
    return std::nullopt;
  }

  std::size_t index_of(const VarTag& tag) const {
    auto i = find(tag);
    if (!i) throw usage_error("AmbientMismatch", "variable " + var_name(tag) + " not in ambient");
    return *i;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& t : tags_) out.push_back(var_name(t));
    return out;
  }

  VarList concat(const VarList& other) const {
    std::vector<VarTag> tags = tags_;
    tags.insert(tags.end(), other.tags_.begin(), other.tags_.end());
    return VarList(std::move(tags));
  }

  friend bool operator==(const VarList&, const VarList&) = default;

 private:
  std::vector<VarTag> tags_;
};

}  // namespace symdio
