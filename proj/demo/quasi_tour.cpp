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

// A short walk through the library: a quadric, a pivot that loses the
// nucleus, and a switch that changes the type.

#include <iostream>

#include "qps/qps.hpp"

using namespace qps;

namespace {

void show(const char* label, const pg::PointSet& s, const forms::PolarKind& k) {
  auto spec = spectra::spectrum(s);
  std::cout << label << ": " << s.size() << " points, spectrum";
  for (const auto& [size, count] : spec.histogram) std::cout << ' ' << size << 'x' << count;
  std::cout << ", " << (spectra::classify(s, spec, k).quasi_polar ? "quasi-" : "not quasi-")
            << forms::family_name(k.family);
  if (auto n = spectra::find_line_nucleus(s))
    std::cout << ", nucleus (" << io::format_point(s.space(), *n) << ")";
  std::cout << '\n';
}

}  // namespace

int main() {
  forms::PolarKind k{forms::Family::parabolic, 4, 2};
  auto sp = pg::cached_space(4, 2);
  auto form = forms::canonical_form(k, sp);
  auto q = forms::point_set(form);
  show("Q(4,2)", q, k);

  auto pi = forms::perp(form, q.indices().front());
  auto shifted = surgery::shifted_nucleus_pivot(q, pi);
  show("pivot with a shifted base", shifted.result, k);

  auto swapped = surgery::cone_swap(q, pi);
  show("cone swap", swapped.result, k);

  forms::PolarKind hyp{forms::Family::hyperbolic, 5, 2}, ell{forms::Family::elliptic, 5, 2};
  auto h = forms::point_set(forms::canonical_form(hyp, pg::cached_space(5, 2)));
  show("Q+(5,2)", h, hyp);
  show("affine switch of Q+(5,2)", surgery::affine_switch(h).result, ell);

  auto roots = spectra::cardinality_roots({forms::Family::hermitian, 2, 4});
  std::cout << "H(2,4): sizes " << roots.root_classical << " and " << roots.root_other.num << " satisfy the counting equation\n";
  return 0;
}
