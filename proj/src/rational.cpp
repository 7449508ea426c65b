#include "trn/rational.hpp"

#include <stdexcept>

namespace trn {

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::invalid_argument("Rat: division by zero");
  q_ /= o.q_;
  return *this;
}

Rat Rat::parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      mpq_class q(mpz_class(s), 1);
      return Rat(q);
    }
    mpz_class num(s.substr(0, slash));
    mpz_class den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Rat(q);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("Rat: cannot parse '" + s + "' as p/q");
  }
}

std::string Rat::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rat::decimal(int places) const {
  mpz_class num = q_.get_num();
  const mpz_class& den = q_.get_den();
  bool negative = num < 0;
  if (negative) num = -num;

  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  num *= scale;

  mpz_class quo, rem;
  mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * rem >= den) ++quo;  // half rounds up (away from zero)

  std::string digits = quo.get_str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, places + 1 - digits.size(), '0');
  if (places > 0) digits.insert(digits.size() - places, ".");
  if (negative && quo != 0) digits.insert(0, "-");
  return digits;
}

}  // namespace trn
