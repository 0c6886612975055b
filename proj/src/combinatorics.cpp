#include "chaoskit/combinatorics.hpp"

#include <string>

namespace chaoskit {

TupleClass parse_tuple_class(std::string_view text) {
  if (text == "A") return TupleClass::A;
  if (text == "B") return TupleClass::B;
  if (text == "C") return TupleClass::C;
  if (text == "E") return TupleClass::E;
  throw InputError("unknown tuple class '" + std::string(text) + "' (expected A|B|C|E)");
}

const char* to_string(TupleClass cls) {
  switch (cls) {
    case TupleClass::A: return "A";
    case TupleClass::B: return "B";
    case TupleClass::C: return "C";
    case TupleClass::E: return "E";
  }
  return "?";
}

bool in_class_a(int p, int k, const std::vector<int>& r) {
  if (p < 1 || k < 2 || static_cast<int>(r.size()) != k - 1) return false;
  int twice_sum = 0;
  for (int j = 1; j <= k - 1; ++j) {
    const int rj = r[static_cast<std::size_t>(j - 1)];
    if (rj < 0 || rj > p || rj > j * p - twice_sum) return false;
    twice_sum += 2 * rj;
  }
  return true;
}

namespace {

bool in_class_b(int p, int k, const std::vector<int>& r) {
  if (!in_class_a(p, k, r)) return false;
  int sum = 0;
  for (int v : r) sum += v;
  return 2 * sum == k * p;
}

bool all_extreme(int p, const std::vector<int>& r) {
  for (int v : r)
    if (v != 0 && v != p) return false;
  return true;
}

bool matches(TupleClass wanted, TupleClass finest) {
  if (wanted == TupleClass::A) return true;
  if (wanted == TupleClass::B) return finest == TupleClass::C || finest == TupleClass::E;
  return wanted == finest;
}

}  // namespace

TupleClass classify(int p, int k, const std::vector<int>& r) {
  if (!in_class_a(p, k, r)) throw PreconditionError("tuple is not in A_k");
  if (!in_class_b(p, k, r)) return TupleClass::A;
  return all_extreme(p, r) ? TupleClass::C : TupleClass::E;
}

ContractionTuple::ContractionTuple(int p, int k, std::vector<int> r, TupleClass cls)
    : p_(p), k_(k), r_(std::move(r)), class_(cls) {
  const TupleClass finest = classify(p_, k_, r_);
  if (!matches(cls, finest))
    throw PreconditionError(std::string("tuple is not in class ") + to_string(cls) + " (finest class " +
                            to_string(finest) + ")");
  class_ = finest;
}

int ContractionTuple::order_before(int j) const {
  int order = j * p_;
  for (int i = 0; i < j - 1; ++i) order -= 2 * r_[static_cast<std::size_t>(i)];
  return order;
}

std::vector<ContractionTuple> enumerate(int p, int k, TupleClass cls) {
  if (p < 1 || k < 2) throw InputError("enumerate needs p >= 1 and k >= 2");
  std::vector<ContractionTuple> out;
  std::vector<int> r(static_cast<std::size_t>(k - 1));
  const bool need_b = cls != TupleClass::A;

  // `order` is the running kernel's order before step j. For B-type classes
  // a prefix is viable only if the remaining steps can bring it to 0; each
  // step lowers the order by at most p.
  auto dfs = [&](auto&& self, int j, int order) -> void {
    if (j == k) {
      if (need_b && order != 0) return;
      const TupleClass finest = classify(p, k, r);
      if (matches(cls, finest)) out.emplace_back(p, k, r, finest);
      return;
    }
    const int hi = std::min(p, order);
    for (int rj = 0; rj <= hi; ++rj) {
      if (cls == TupleClass::C && rj != 0 && rj != p) continue;
      const int next = order + p - 2 * rj;
      if (need_b && next > (k - 1 - j) * p) continue;
      r[static_cast<std::size_t>(j - 1)] = rj;
      self(self, j + 1, next);
    }
  };
  dfs(dfs, 1, p);
  return out;
}

std::size_t count_c(int p, int k) { return enumerate(p, k, TupleClass::C).size(); }

BigInt catalan(unsigned n) { return binomial(2 * static_cast<long>(n), n) / (n + 1); }

bool dyck_check(const ContractionTuple& t) {
  if (t.tuple_class() != TupleClass::C) throw PreconditionError("dyck_check requires a class-C tuple");
  const int k = t.k();
  int partial = 1;
  for (int j = 1; j <= k - 1; ++j) {
    partial += 1 - 2 * t.r()[static_cast<std::size_t>(j - 1)] / t.p();
    if (j <= k - 2 && partial < 0) return false;
  }
  return partial == 0;
}

namespace {

int step(std::uint32_t minus_mask, int j) { return (minus_mask >> (j - 1)) & 1U ? -1 : 1; }

}  // namespace

bool dyck_condition_strong(std::uint32_t minus_mask, int k) {
  // Compare doubled quantities to stay in integers: 2(1 + s_1..s_j) >= 1 - s_{j+1}.
  int partial = 1;
  for (int j = 1; j <= k - 1; ++j) {
    partial += step(minus_mask, j);
    if (j <= k - 2 && 2 * partial < 1 - step(minus_mask, j + 1)) return false;
  }
  return partial == 0;
}

bool dyck_condition_weak(std::uint32_t minus_mask, int k) {
  int partial = 1;
  for (int j = 1; j <= k - 1; ++j) {
    partial += step(minus_mask, j);
    if (j <= k - 2 && partial < 0) return false;
  }
  return partial == 0;
}

BigInt classical_coeff(const ContractionTuple& t) {
  BigInt out = 1;
  for (int j = 1; j <= t.k() - 1; ++j) {
    const int rj = t.r()[static_cast<std::size_t>(j - 1)];
    out *= factorial(static_cast<unsigned>(rj)) * binomial(t.p(), rj) * binomial(t.order_before(j), rj);
  }
  return out;
}

BigInt limit_weight(const ContractionTuple& t) {
  if (t.tuple_class() != TupleClass::C) throw PreconditionError("limit_weight requires a class-C tuple");
  BigInt out = 1;
  for (int j = 1; j <= t.k() - 1; ++j)
    out *= binomial(t.order_before(j) / t.p(), t.r()[static_cast<std::size_t>(j - 1)] / t.p());
  return out;
}

Rational limit_value(const ContractionTuple& t) {
  if (t.tuple_class() != TupleClass::C) throw PreconditionError("limit_value requires a class-C tuple");
  BigInt den = 1;
  for (int j = 1; j <= t.k() - 1; ++j) {
    const int rj = t.r()[static_cast<std::size_t>(j - 1)];
    den *= factorial(static_cast<unsigned>(rj)) * binomial(t.order_before(j), rj);
  }
  Rational out(limit_weight(t), den);
  out.canonicalize();
  return out;
}

BigInt gaussian_moment(unsigned k) {
  if (k % 2 == 1) return 0;
  BigInt out = 1;
  for (unsigned i = 1; i < k; i += 2) out *= i;
  return out;
}

BigInt semicircle_moment(unsigned k) {
  if (k % 2 == 1) return 0;
  return catalan(k / 2);
}

}  // namespace chaoskit
