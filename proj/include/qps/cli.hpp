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

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qps/census.hpp"
#include "qps/collineation.hpp"
#include "qps/error.hpp"
#include "qps/forms.hpp"
#include "qps/io.hpp"
#include "qps/parallel.hpp"
#include "qps/report.hpp"
#include "qps/spectra.hpp"
#include "qps/surgery.hpp"

namespace qps::cli {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kIo = 3 };

struct Options {
  int threads = 0;
  bool timing = false;
  std::string what;
  std::string in, out, json, base, section;
  std::string kind;
  int m = -1, q = -1;
  std::string hyperplane, sub, tangent, point, point2;
  int choice = 1;
  bool csv = false;
};

namespace detail {

using forms::Family;
using forms::PolarKind;
using pg::PointIndex;
using pg::PointSet;
using pg::SpacePtr;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Family family(const Options& o) {
  if (o.kind.empty()) throw Usage("--kind is required");
  auto f = forms::parse_family(o.kind);
  if (!f) throw Usage("unknown kind: " + o.kind);
  return *f;
}

inline PolarKind kind_of(const Options& o, std::optional<Family> fallback = std::nullopt, int m = -1, int q = -1) {
  Family f = o.kind.empty() && fallback ? *fallback : family(o);
  PolarKind k{f, m >= 0 ? m : o.m, q >= 0 ? q : o.q};
  if (k.m < 0 || k.q < 0) throw Usage("--m and --q are required");
  forms::validate_kind(k);
  return k;
}

inline PointIndex parse_coords(const pg::ProjSpace& sp, const std::string& text, const char* what) {
  std::vector<gf::Elem> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int x = std::stoi(tok, &used);
      if (used != tok.size() || x < 0 || x >= sp.q()) throw Usage("");
      v.push_back(static_cast<gf::Elem>(x));
    } catch (const std::exception&) {
      throw Usage(std::string("bad coordinates for ") + what + ": " + text);
    }
  }
  if (v.size() != sp.dim()) throw Usage(std::string(what) + " needs " + std::to_string(sp.dim()) + " coordinates");
  try {
    return pg::normalize_point(sp, v);
  } catch (const Error&) {
    throw Usage(std::string(what) + " is the zero vector");
  }
}

inline PointSet load_in(const Options& o) {
  if (o.in.empty()) throw Usage("--in is required");
  return io::load_pointset(o.in);
}

inline PointSet load_like(const std::string& path, const SpacePtr& sp, const char* what) {
  if (path.empty()) throw Usage(std::string(what) + " is required");
  PointSet s = io::load_pointset(path);
  if (s.space().m() != sp->m() || s.space().q() != sp->q()) throw Usage(std::string(what) + " lives in another space");
  return PointSet(sp, s.bits());
}

struct Input {
  PointSet set;
  PolarKind kind;
};

// --in if given, else the canonical set of the kind. A file fixes m and q.
inline Input input_or_canonical(const Options& o, std::optional<Family> fallback = std::nullopt, int m = -1,
                                int q = -1) {
  if (!o.in.empty()) {
    PointSet s = io::load_pointset(o.in);
    PolarKind k{o.kind.empty() && fallback ? *fallback : family(o), s.space().m(), s.space().q()};
    forms::validate_kind(k);
    return {s, k};
  }
  auto k = kind_of(o, fallback, m, q);
  return {forms::point_set(forms::canonical_form(k, pg::cached_space(k.m, k.q))), k};
}

// --choice 0 keeps the original; --choice i picks the i-th generated alternative.
template <class Gen>
inline PointSet chosen(const Options& o, const PointSet& original, Gen&& generate) {
  if (o.choice < 0) throw Usage("--choice must be non-negative");
  if (o.choice == 0) return original;
  auto alts = generate(static_cast<std::size_t>(o.choice));
  if (alts.size() < static_cast<std::size_t>(o.choice)) throw Usage("--choice out of range");
  return alts[o.choice - 1];
}

inline void emit(const report::Json& j, const Options& o, std::ostream& out) {
  if (o.json.empty()) {
    report::emit(j, out);
    return;
  }
  std::ofstream f(o.json, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::IoError, "cannot write " + o.json);
  report::emit(j, f);
}

inline PointIndex lowest_of_size(const PointSet& s, std::int64_t size, const char* what) {
  auto spec = spectra::spectrum(s);
  for (PointIndex h = 0; h < spec.per_hyperplane.size(); ++h)
    if (spec.per_hyperplane[h] == size) return h;
  throw Usage(std::string("no ") + what + " hyperplane");
}

inline PointIndex hyperplane_or(const PointSet& s, const std::string& text, std::int64_t size,
                                const char* what) {
  if (!text.empty()) return parse_coords(s.space(), text, "--hyperplane");
  return lowest_of_size(s, size, what);
}

inline PointIndex lowest_nonsingular(const PointSet& s, const PolarKind& k) {
  auto prof = spectra::profile(k);
  auto spec = spectra::spectrum(s);
  for (PointIndex h = 0; h < spec.per_hyperplane.size(); ++h) {
    auto t = prof.type_of(spec.per_hyperplane[h]);
    if (t != spectra::HyperplaneType::singular && t != spectra::HyperplaneType::inadmissible) return h;
  }
  throw Usage("no non-singular hyperplane");
}

inline int construct(const Options& o, std::ostream& out) {
  if (o.what != "canonical") throw Usage("construct supports only 'canonical'");
  auto k = kind_of(o);
  PointSet s = forms::point_set(forms::canonical_form(k, pg::cached_space(k.m, k.q)));
  if (o.out.empty())
    io::write_pointset(s, out);
  else
    io::save_pointset(s, o.out);
  return kOk;
}

inline int spectrum(const Options& o, std::ostream& out) {
  PointSet s = load_in(o);
  PolarKind k{family(o), s.space().m(), s.space().q()};
  forms::validate_kind(k);
  auto j = report::set_report(s, k);
  emit(j, o, out);
  return j["verdict"].get<std::string>().starts_with("quasi-") ? kOk : kNegative;
}

inline int verify(const Options& o, std::ostream& out) {
  if (o.what != "conditions") throw Usage("verify supports only 'conditions'");
  PointSet s = load_in(o);
  PolarKind k{Family::parabolic, s.space().m(), s.space().q()};
  auto c = spectra::nucleus_conditions(s);
  auto j = report::set_report(s, k);
  j["conditions"] = report::conditions_json(c, s.space());
  emit(j, o, out);
  return c.b_prime ? kOk : kNegative;
}

inline surgery::SurgeryResult run_surgery(const Options& o, PolarKind& k) {
  const std::string& c = o.what;
  if (c == "pivot") {
    auto in = input_or_canonical(o);
    k = in.kind;
    PointSet s = in.set;
    auto prof = spectra::profile(k);
    PointIndex pi = hyperplane_or(s, o.hyperplane, prof.singular_size, "singular");
    PointSet base(s.space_ptr());
    if (!o.base.empty()) {
      base = load_like(o.base, s.space_ptr(), "--base");
    } else {
      auto dec = surgery::decompose_section(s, pi);
      pg::Frame fr(dec.mu);
      auto gens = pg::elementary_generators(s.space().field(), fr.local()->dim());
      base = chosen(o, dec.base, [&](std::size_t n) {
        std::vector<PointSet> out;
        for (const auto& img : pg::collineation_images(fr.pull(dec.base), gens, n)) out.push_back(fr.push(img));
        return out;
      });
    }
    return surgery::pivot(s, k, pi, base);
  }
  if (c == "cone-swap" || c == "shifted-nucleus") {
    PointSet s = input_or_canonical(o, Family::parabolic).set;
    k = {Family::parabolic, s.space().m(), s.space().q()};
    PointIndex pi = hyperplane_or(s, o.hyperplane, spectra::profile(k).singular_size, "singular");
    return c == "cone-swap" ? surgery::cone_swap(s, pi) : surgery::shifted_nucleus_pivot(s, pi);
  }
  if (c == "repeated-pivot") {
    k = kind_of(o);
    auto form = forms::canonical_form(k, pg::cached_space(k.m, k.q));
    PointSet s = forms::point_set(form);
    const auto& sp = s.space();
    PointIndex p = o.point.empty() ? s.indices().front() : parse_coords(sp, o.point, "--point");
    std::optional<PointIndex> r;
    if (!o.point2.empty()) {
      r = parse_coords(sp, o.point2, "--point2");
    } else {
      for (auto x : s.indices())
        if (x != p && pg::line_through(s.space_ptr(), p, x).is_subset_of(s)) {
          r = x;
          break;
        }
      if (!r) throw Usage("no line of the set through --point");
    }
    auto slots = surgery::repeated_pivot_slots(form, p, *r);
    auto base = chosen(o, slots.front().base, [&](std::size_t n) { return surgery::axis_fixing_bases(slots.front(), n); });
    return surgery::repeated_pivot(form, p, *r, {{slots.front().point, base}});
  }
  if (c == "affine-switch") {
    PointSet s = input_or_canonical(o, Family::hyperbolic).set;
    k = {Family::elliptic, s.space().m(), s.space().q()};
    return surgery::affine_switch(s);
  }
  if (c == "q2-switch") {
    PointSet s = input_or_canonical(o, Family::parabolic).set;
    k = {Family::parabolic, s.space().m(), s.space().q()};
    PointIndex pi = o.hyperplane.empty() ? lowest_nonsingular(s, k) : parse_coords(s.space(), o.hyperplane, "--hyperplane");
    return surgery::nonsingular_switch_q2(s, pi, load_like(o.section, s.space_ptr(), "--section"));
  }
  if (c == "q3-switch") {
    k = kind_of(o, Family::parabolic, -1, o.q < 0 ? 3 : o.q);
    auto form = forms::canonical_form(k, pg::cached_space(k.m, k.q));
    PointSet s = forms::point_set(form);
    const auto& sp = s.space_ptr();
    PointIndex xi = o.hyperplane.empty() ? lowest_nonsingular(s, k) : parse_coords(*sp, o.hyperplane, "--hyperplane");
    std::optional<PointIndex> h;
    if (!o.sub.empty()) {
      h = parse_coords(*sp, o.sub, "--sub");
    } else {
      auto prof = spectra::profile(k);
      auto eps = prof.type_of(static_cast<std::int64_t>(surgery::section(s, xi).size())) ==
                         spectra::HyperplaneType::elliptic
                     ? Family::elliptic
                     : Family::hyperbolic;
      auto want = spectra::cone_size(eps, k.m - 3, k.q);
      PointSet sec = surgery::section(s, xi);
      for (PointIndex x = 0; x < sp->num_hyperplanes() && !h; ++x)
        if (x != xi && static_cast<std::int64_t>(sec.meet_count(sp->hyperplane_points(x))) == want) h = x;
      if (!h) throw Usage("no singular subspace of xi");
    }
    if (*h == xi) throw Usage("--sub must differ from --hyperplane");
    return surgery::internal_switch_q3(form, xi, surgery::meet_hyperplanes(sp, xi, *h));
  }
  if (c == "oval-swap") {
    PointSet s = input_or_canonical(o, Family::parabolic, 2).set;
    k = {Family::parabolic, s.space().m(), s.space().q()};
    PointIndex t = hyperplane_or(s, o.tangent, 1, "tangent");
    return surgery::oval_nucleus_swap(s, t);
  }
  throw Usage("unknown surgery: " + c);
}

inline int surgery_cmd(const Options& o, std::ostream& out) {
  PolarKind k{};
  auto r = run_surgery(o, k);
  if (!o.out.empty()) io::save_pointset(r.result, o.out);
  auto j = report::set_report(r.result, k);
  j["surgery"] = report::surgery_json(r.record);
  emit(j, o, out);
  return j["verdict"].get<std::string>().starts_with("quasi-") ? kOk : kNegative;
}

inline census::CensusResult run_census(const Options& o) {
  const std::string& c = o.what;
  auto canonical = [&](Family fallback, int m = -1, int q = -1) {
    auto k = kind_of(o, fallback, m, q);
    return forms::canonical_form(k, pg::cached_space(k.m, k.q));
  };
  if (c == "nucleus-pivot") return census::nucleus_pivot_census(canonical(Family::parabolic, o.m < 0 ? 4 : o.m, o.q < 0 ? 2 : o.q));
  if (c == "singular-switch") return census::singular_switch_census(canonical(Family::parabolic, o.m < 0 ? 4 : o.m, o.q < 0 ? 2 : o.q));
  if (c == "quadrics") {
    auto k = kind_of(o);
    return census::quadrics_census(pg::cached_space(k.m, k.q), k.family);
  }
  if (c == "classical-dist") return census::classical_distribution_census(canonical(Family::parabolic));
  if (c == "two-secants") return census::two_secant_census(canonical(Family::parabolic));
  if (c == "nonsingular-switch") return census::nonsingular_switch_census(canonical(Family::parabolic));
  if (c == "oval-switch") return census::oval_switch_census(pg::cached_space(2, o.q < 0 ? 3 : o.q));
  throw Usage("unknown census: " + c);
}

// Censuses carrying a self-check fact fail when the check fails.
inline bool census_ok(const census::CensusResult& r) {
  if (auto v = r.fact("violations"); v && *v != 0) return false;
  if (auto v = r.fact("agree"); v && *v != 1) return false;
  if (auto v = r.fact("independent_of_hyperplane"); v && *v != 1) return false;
  return true;
}

inline int census_cmd(const Options& o, std::ostream& out) {
  auto r = run_census(o);
  if (o.csv) {
    if (o.json.empty()) {
      report::write_csv(r, out);
    } else {
      std::ofstream f(o.json, std::ios::binary | std::ios::trunc);
      if (!f) throw Error(Errc::IoError, "cannot write " + o.json);
      report::write_csv(r, f);
    }
  } else {
    emit(report::census_report(r, o.timing), o, out);
  }
  return census_ok(r) ? kOk : kNegative;
}

inline int roots(const Options& o, std::ostream& out) {
  auto k = kind_of(o);
  auto r = spectra::cardinality_roots(k);
  report::Json j;
  j["format"] = report::kFormat;
  j["kind"] = report::Json{{"family", forms::family_name(k.family)}, {"m", k.m}, {"q", k.q}};
  j["roots"] = report::Json{{"classical", r.root_classical},
                            {"other", report::Json{{"num", r.root_other.num}, {"den", r.root_other.den}}},
                            {"other_integral", r.integral}};
  emit(j, o, out);
  return kOk;
}

inline int exit_for(Errc c) {
  switch (c) {
    case Errc::BadHeader:
    case Errc::ParseError:
    case Errc::DuplicatePoint:
    case Errc::IoError: return kIo;
    default: return kUsage;
  }
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quasi-polar spaces in finite projective spaces", "qps"};
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "Worker threads (overrides QPS_THREADS)")->check(CLI::Range(1, 1024));
  app.add_flag("--timing", o.timing, "Include runtime_ms in census reports");

  auto kind_opts = [&](CLI::App* s) {
    s->add_option("--kind", o.kind, "parabolic, hyperbolic, elliptic or hermitian");
    s->add_option("--m", o.m, "Projective dimension");
    s->add_option("--q", o.q, "Field order");
  };

  auto* construct = app.add_subcommand("construct", "Write a canonical polar space");
  construct->add_option("what", o.what)->required();
  kind_opts(construct);
  construct->add_option("--out", o.out, "Output point-set file (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Hyperplane spectrum and verdict");
  spectrum->add_option("--in", o.in)->required();
  spectrum->add_option("--kind", o.kind)->required();
  spectrum->add_option("--json", o.json, "Report file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Nucleus conditions of a set in PG(2n,q)");
  verify->add_option("what", o.what)->required();
  verify->add_option("--in", o.in)->required();
  verify->add_option("--json", o.json);

  auto* surgery = app.add_subcommand("surgery", "Apply a switching construction");
  surgery->add_option("construction", o.what,
                      "pivot, cone-swap, repeated-pivot, affine-switch, q2-switch, q3-switch, oval-swap, shifted-nucleus")
      ->required();
  kind_opts(surgery);
  surgery->add_option("--in", o.in, "Input set (default canonical)");
  surgery->add_option("--hyperplane", o.hyperplane, "Dual coordinates c0,...,cm");
  surgery->add_option("--sub", o.sub, "Second hyperplane cutting the switch subspace");
  surgery->add_option("--tangent", o.tangent, "Tangent line as dual coordinates");
  surgery->add_option("--base", o.base, "New base point-set file");
  surgery->add_option("--section", o.section, "New section point-set file");
  surgery->add_option("--point", o.point, "Point coordinates");
  surgery->add_option("--point2", o.point2, "Second point coordinates");
  surgery->add_option("--choice", o.choice, "Generated alternative base (0 keeps the original)");
  surgery->add_option("--out", o.out, "Output point-set file");
  surgery->add_option("--json", o.json);

  auto* census = app.add_subcommand("census", "Run an exhaustive census");
  census->add_option("name", o.what,
                     "nucleus-pivot, singular-switch, quadrics, classical-dist, two-secants, nonsingular-switch, "
                     "oval-switch")
      ->required();
  kind_opts(census);
  census->add_flag("--csv", o.csv, "Flat CSV instead of JSON");
  census->add_option("--json", o.json, "Output file (default stdout)");

  auto* roots = app.add_subcommand("roots", "Roots of the cardinality equation");
  kind_opts(roots);
  roots->add_option("--json", o.json);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (o.threads > 0) set_threads(static_cast<unsigned>(o.threads));
  try {
    if (*construct) return detail::construct(o, out);
    if (*spectrum) return detail::spectrum(o, out);
    if (*verify) return detail::verify(o, out);
    if (*surgery) return detail::surgery_cmd(o, out);
    if (*census) return detail::census_cmd(o, out);
    if (*roots) return detail::roots(o, out);
  } catch (const detail::Usage& e) {
    err << "qps: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "qps: " << e.what() << '\n';
    return detail::exit_for(e.code());
  }
  return kUsage;
}

}  // namespace qps::cli
