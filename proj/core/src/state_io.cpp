// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#include <ostream>

#include "pnspec/state.hpp"

namespace pnspec {
namespace {

template <class R>
void write_state_impl(std::ostream& os, const SpectralState<R>& st) {
  using S = ScalarOps<R>;
  os << "# columns: k ell re im\n";
  os << "# order " << st.order() << " modes " << st.modes()
     << " precision " << st.precision() << "\n";
  for (int k = -st.modes(); k <= st.modes(); ++k) {
    for (int l = 0; l <= st.order(); ++l) {
      const Cplx<R> z = st.coeff(l, k);
      os << k << ' ' << l << ' ' << S::str(z.re, 0) << ' ' << S::str(z.im, 0) << '\n';
    }
  }
}

}  // namespace

void write_state(std::ostream& os, const SpectralState<double>& st) {
  write_state_impl(os, st);
}
void write_state(std::ostream& os, const SpectralState<ExtendedReal>& st) {
  write_state_impl(os, st);
}

}  // namespace pnspec
