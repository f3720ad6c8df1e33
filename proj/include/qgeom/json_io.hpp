#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qgeom/algebra.hpp"
#include "qgeom/states.hpp"

namespace qgeom {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Matrix schema: {"dim": n, "entries": [[re, im], ...]} row-major, n^2 pairs.

inline json matrix_to_json(const CMat& m) {
  ensure_square(m, "matrix_to_json");
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"dim", m.rows()}, {"entries", entries}};
}

inline CMat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw std::invalid_argument("matrix json: need dim and entries");
  const auto n = j.at("dim").get<Eigen::Index>();
  if (n <= 0) throw std::invalid_argument("matrix json: dim must be positive");
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * n))
    throw std::invalid_argument("matrix json: entries length must be dim^2");
  CMat m(n, n);
  std::size_t at = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j2 = 0; j2 < n; ++j2, ++at) {
      const json& e = entries.at(at);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix json: entries must be [re, im] pairs");
      m(i, j2) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  if (!all_finite(m)) throw std::invalid_argument("matrix json: non-finite entries");
  return m;
}

inline json state_to_json(const DensityState& s) {
  json j = matrix_to_json(s.matrix());
  j["kind"] = "density_state";
  return j;
}

inline DensityState state_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != std::string("density_state"))
    throw std::invalid_argument("state json: kind must be density_state");
  return make_state(matrix_from_json(j));
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

// ---------------------------------------------------------------------------
// Canonical emission: keys sorted (json object order), doubles in %.17g, no
// locale dependence. Identical values serialize to identical bytes.

namespace detail {

inline void canonical_dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        canonical_dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        canonical_dump(j.at(i), out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string canonical_json(const json& j) {
  std::string out;
  detail::canonical_dump(j, out);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Content digest (FNV-1a 64) for input provenance in reports.

inline std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::uint64_t digest_file(const std::string& path, std::uint64_t h = 0xcbf29ce484222325ULL) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str(), h);
}

}  // namespace qgeom
