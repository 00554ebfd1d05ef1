#pragma once

#include <string>
#include <vector>

#include "akg/scalar.hpp"

namespace akg {

/// One quantity that should vanish, tagged with the check it belongs to.
template <class S>
struct Residual {
  std::string check;
  std::string component;
  S value;
};

template <class S>
using Residuals = std::vector<Residual<S>>;

/// "(1,2)"-style 1-based component label.
inline std::string label(std::initializer_list<int> idx) {
  std::string s = "(";
  bool first = true;
  for (int i : idx) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

template <class S>
void add_residual(Residuals<S>& out, const std::string& check, std::string component, S value) {
  out.push_back({check, std::move(component), std::move(value)});
}

template <class S>
void add_matrix(Residuals<S>& out, const std::string& check, const Mat<S>& m, const std::string& prefix = "") {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) add_residual(out, check, prefix + label({i, j}), m(i, j));
}

template <class S>
void add_vector(Residuals<S>& out, const std::string& check, const Vec<S>& v, const std::string& prefix = "") {
  for (int i = 0; i < v.size(); ++i) add_residual(out, check, prefix + label({i}), v(i));
}

}  // namespace akg
