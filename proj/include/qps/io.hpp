// Copyright 2026 The qps Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qps/error.hpp"
#include "qps/pg.hpp"

namespace qps::io {

using pg::PointSet;

inline constexpr std::string_view kMagic = "QPS 1";

namespace detail {

inline Error at_line(Errc c, std::size_t line, const std::string& what) {
  return Error(c, "line " + std::to_string(line) + ": " + what);
}

inline bool blank_or_comment(const std::string& s) {
  auto i = s.find_first_not_of(" \t");
  return i == std::string::npos || s[i] == '#';
}

}  // namespace detail

// Grammar: "QPS 1", then "PG m q", then one point per line. '#' lines and
// blank lines are skipped. Points are normalized; duplicates are rejected.
inline PointSet parse_pointset(std::istream& in) {
  std::string line;
  std::size_t no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++no;
      if (line.find('\r') != std::string::npos) throw detail::at_line(Errc::ParseError, no, "carriage return");
      if (!detail::blank_or_comment(line)) return true;
    }
    return false;
  };
  if (!next() || line != kMagic) throw Error(Errc::BadHeader, "expected \"QPS 1\"");
  if (!next()) throw Error(Errc::BadHeader, "missing space line");
  std::istringstream hs(line);
  std::string tag, extra;
  int m = -1, q = -1;
  if (!(hs >> tag >> m >> q) || tag != "PG" || (hs >> extra) || m < 1)
    throw detail::at_line(Errc::BadHeader, no, "expected \"PG m q\"");
  pg::SpacePtr sp;
  try {
    sp = pg::cached_space(m, q);
  } catch (const Error& e) {
    throw detail::at_line(Errc::BadHeader, no, e.what());
  }
  PointSet s(sp);
  std::vector<gf::Elem> v(sp->dim());
  while (next()) {
    std::istringstream ls(line);
    for (auto& c : v) {
      long x;
      if (!(ls >> x)) throw detail::at_line(Errc::ParseError, no, "expected " + std::to_string(sp->dim()) + " coordinates");
      if (x < 0 || x >= q) throw detail::at_line(Errc::ParseError, no, "coordinate out of range");
      c = static_cast<gf::Elem>(x);
    }
    if (ls >> extra) throw detail::at_line(Errc::ParseError, no, "trailing tokens");
    pg::PointIndex p;
    try {
      p = pg::normalize_point(*sp, v);
    } catch (const Error&) {
      throw detail::at_line(Errc::ParseError, no, "zero vector");
    }
    if (s.contains(p)) throw detail::at_line(Errc::DuplicatePoint, no, "duplicate point");
    s.insert(p);
  }
  return s;
}

inline PointSet load_pointset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return parse_pointset(in);
}

inline std::string format_point(const pg::ProjSpace& sp, pg::PointIndex p) {
  std::string out;
  for (auto c : sp.point(p)) out += (out.empty() ? "" : " ") + std::to_string(c);
  return out;
}

inline void write_pointset(const PointSet& s, std::ostream& out) {
  const auto& sp = s.space();
  out << kMagic << "\nPG " << sp.m() << ' ' << sp.q() << '\n';
  s.bits().for_each([&](std::size_t p) { out << format_point(sp, static_cast<pg::PointIndex>(p)) << '\n'; });
}

inline void save_pointset(const PointSet& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_pointset(s, out);
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed: " + path);
}

}  // namespace qps::io
