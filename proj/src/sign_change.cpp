#include "lfold/errors.hpp"
#include "lfold/sums.hpp"

namespace lfold::sums {

std::string to_string(SignMode m) {
  switch (m) {
    case SignMode::I: return "I";
    case SignMode::Q: return "Q";
    case SignMode::D: return "D";
  }
  return "?";
}

SignChangeResult first_sign_change(const mf::Eigenform& f, unsigned ell, SignMode mode,
                                   const std::optional<qf::QuadraticForm>& form, std::int64_t D,
                                   std::uint64_t limit) {
  if (ell % 2 == 0) throw DomainError("first_sign_change: ell must be odd");
  if (limit > f.x_max()) {
    throw RangeError("limit " + std::to_string(limit) + " exceeds the coefficient table (x_max = " +
                     std::to_string(f.x_max()) + ")");
  }
  SignChangeResult out;
  out.mode = mode;
  out.search_limit = limit;

  std::vector<qf::QuadraticForm> forms;
  if (mode == SignMode::Q) {
    if (!form) throw InputError("mode Q needs a quadratic form");
    forms.push_back(*form);
  } else if (mode == SignMode::D) {
    forms = qf::class_set(D).forms;
  }
  std::vector<std::vector<std::uint32_t>> counts;
  for (const auto& Q : forms) counts.push_back(qf::representation_counts(Q, limit));

  const auto mask = squarefree_coprime_mask(f.level(), limit);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (!mask[n] || sgn(f.a(n)) >= 0) continue;
    std::optional<std::size_t> rep;
    if (mode != SignMode::I) {
      for (std::size_t i = 0; i < forms.size() && !rep; ++i) {
        if (counts[i][n] > 0) rep = i;
      }
      if (!rep) continue;
    }
    out.found = true;
    out.n_star = n;
    out.witness_a = f.a(n);
    if (rep) {
      out.witness_form = forms[*rep];
      out.witness_point = qf::find_representation(forms[*rep], n);
    }
    return out;
  }
  return out;
}

}  // namespace lfold::sums
