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

#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "qps/census.hpp"
#include "qps/forms.hpp"
#include "qps/pg.hpp"
#include "qps/spectra.hpp"
#include "qps/surgery.hpp"

namespace qps::report {

using Json = nlohmann::ordered_json;
using forms::PolarKind;
using pg::PointIndex;
using pg::PointSet;

inline constexpr const char* kFormat = "qps-report/1";

inline Json coords(const pg::ProjSpace& sp, PointIndex p) {
  Json a = Json::array();
  for (auto c : sp.point(p)) a.push_back(static_cast<int>(c));
  return a;
}

inline Json point_list(const PointSet& s) {
  Json a = Json::array();
  s.bits().for_each([&](std::size_t p) { a.push_back(coords(s.space(), static_cast<PointIndex>(p))); });
  return a;
}

inline Json space_json(const pg::ProjSpace& sp) { return Json{{"m", sp.m()}, {"q", sp.q()}}; }

inline Json header(const pg::ProjSpace& sp) {
  Json j;
  j["format"] = kFormat;
  j["space"] = space_json(sp);
  return j;
}

// Spectrum, verdict, hyperplane types and nucleus of s against a kind.
inline Json set_report(const PointSet& s, const PolarKind& kind) {
  const auto& sp = s.space();
  Json j = header(sp);
  j["size"] = s.size();
  auto spec = spectra::spectrum(s);
  Json h = Json::array();
  for (const auto& [size, count] : spec.histogram) h.push_back(Json{{"size", size}, {"count", count}});
  j["spectrum"] = h;
  auto cls = spectra::classify(s, spec, kind);
  std::string fam(forms::family_name(kind.family));
  j["verdict"] = (cls.quasi_polar ? "quasi-" : "not-quasi-") + fam;
  if (cls.exceptional) j["exceptional"] = *cls.exceptional;
  Json types = Json::object();
  for (const auto& [t, c] : spectra::type_summary(cls.hyperplane_types)) types[t] = c;
  j["hyperplane_types"] = types;
  Json nuc{{"exists", false}};
  if (auto n = spectra::find_line_nucleus(s)) {
    nuc["exists"] = true;
    nuc["point"] = coords(sp, *n);
  }
  j["nucleus"] = nuc;
  return j;
}

inline Json conditions_json(const spectra::ConditionReport& c, const pg::ProjSpace& sp) {
  Json j{{"a", c.a}, {"b", c.b}, {"b_prime", c.b_prime}, {"c", c.c}, {"c_prime", c.c_prime}, {"d", c.d},
         {"d_prime", c.d_prime}, {"singular_hyperplanes", c.singular_count}};
  if (c.nucleus_candidate) j["candidate"] = coords(sp, *c.nucleus_candidate);
  return j;
}

inline Json surgery_json(const surgery::SurgeryRecord& r) {
  const auto& sp = r.removed.space();
  Json j;
  j["construction"] = r.construction;
  if (r.hyperplane) j["hyperplane"] = coords(sp, *r.hyperplane);
  if (r.vertex) j["vertex"] = coords(sp, *r.vertex);
  Json flats = Json::object();
  for (const auto& [name, f] : r.flats) {
    Json rows = Json::array();
    for (const auto& v : f.basis()) {
      Json row = Json::array();
      for (auto c : v) row.push_back(static_cast<int>(c));
      rows.push_back(row);
    }
    flats[name] = rows;
  }
  j["flats"] = flats;
  j["removed"] = point_list(r.removed);
  j["added"] = point_list(r.added);
  return j;
}

inline Json census_json(const census::CensusResult& r, bool timing) {
  Json j;
  j["name"] = r.name;
  j["total"] = r.total_candidates;
  Json b = Json::object();
  for (const auto& [k, v] : r.breakdown) b[k] = v;
  j["breakdown"] = b;
  Json f = Json::object();
  for (const auto& [k, v] : r.facts) f[k] = v;
  j["facts"] = f;
  Json w = Json::object();
  for (const auto& [k, sets] : r.witnesses) {
    Json a = Json::array();
    for (const auto& s : sets) a.push_back(point_list(s));
    w[k] = a;
  }
  j["witnesses"] = w;
  if (timing) j["runtime_ms"] = static_cast<std::int64_t>(r.runtime_ms);
  return j;
}

inline Json census_report(const census::CensusResult& r, bool timing) {
  Json j;
  j["format"] = kFormat;
  j["space"] = Json{{"m", r.m}, {"q", r.q}};
  j["census"] = census_json(r, timing);
  return j;
}

inline void write_csv(const census::CensusResult& r, std::ostream& out) {
  out << "section,key,value\n";
  out << "total,," << r.total_candidates << '\n';
  for (const auto& [k, v] : r.breakdown) out << "breakdown," << k << ',' << v << '\n';
  for (const auto& [k, v] : r.facts) out << "fact," << k << ',' << v << '\n';
}

inline void emit(const Json& j, std::ostream& out) {
  out << j.dump() << '\n';
  if (!out) throw Error(Errc::IoError, "write failed");
}

}  // namespace qps::report
