#include "parry/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace parry {

ParrySubstitution::ParrySubstitution(Kind kind, std::int64_t m, std::int64_t p,
                                     std::vector<std::int64_t> alphas)
    : kind_(kind), m_(m), p_(p), alphas_(std::move(alphas)) {
  if (alphas_.empty()) {
    throw SyntaxError("empty exponent list");
  }
  if (m_ < 1) {
    throw RangeError("m must be at least 1");
  }
  if (kind_ == Kind::Simple) {
    if (p_ != 0) throw RangeError("simple substitutions have p = 0");
  } else {
    if (p_ < 1) throw RangeError("non-simple substitutions need p >= 1");
  }
  if (static_cast<std::size_t>(m_ + p_) != alphas_.size()) {
    throw RangeError("m + p must equal the number of exponents");
  }
  if (alphas_.size() > kMaxAlphabet) {
    throw RangeError("alphabet too large");
  }
  for (std::int64_t a : alphas_) {
    if (a < 0) throw RangeError("negative exponent");
  }
}

ParrySubstitution ParrySubstitution::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SyntaxError("spec document must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw SyntaxError("missing \"kind\"");
  }
  const std::string kind_s = doc["kind"].get<std::string>();
  Kind kind;
  if (kind_s == "simple") {
    kind = Kind::Simple;
  } else if (kind_s == "nonsimple") {
    kind = Kind::NonSimple;
  } else {
    throw SyntaxError("\"kind\" must be \"simple\" or \"nonsimple\"");
  }
  if (!doc.contains("alphas") || !doc["alphas"].is_array()) {
    throw SyntaxError("missing \"alphas\" array");
  }
  std::vector<std::int64_t> alphas;
  for (const auto& v : doc["alphas"]) {
    if (!v.is_number_integer()) throw SyntaxError("exponents must be integers");
    alphas.push_back(v.get<std::int64_t>());
  }
  if (alphas.empty()) throw SyntaxError("empty exponent list");
  std::int64_t m = 0;
  std::int64_t p = 0;
  if (kind == Kind::Simple) {
    m = static_cast<std::int64_t>(alphas.size());
    if (doc.contains("m")) m = doc["m"].get<std::int64_t>();
    if (doc.contains("p")) p = doc["p"].get<std::int64_t>();
  } else {
    if (!doc.contains("m") || !doc.contains("p")) {
      throw SyntaxError("non-simple spec needs \"m\" and \"p\"");
    }
    m = doc["m"].get<std::int64_t>();
    p = doc["p"].get<std::int64_t>();
  }
  return ParrySubstitution(kind, m, p, std::move(alphas));
}

namespace {

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t v;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw SyntaxError("bad integer in list: \"" + item + "\"");
    }
    if (used != item.size()) throw SyntaxError("bad integer in list: \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw SyntaxError("empty exponent list");
  return out;
}

std::int64_t parse_kv(const std::string& part, const std::string& key) {
  const std::string prefix = key + "=";
  if (part.rfind(prefix, 0) != 0) {
    throw SyntaxError("expected \"" + prefix + "...\" in shorthand");
  }
  try {
    return std::stoll(part.substr(prefix.size()));
  } catch (const std::exception&) {
    throw SyntaxError("bad value for " + key);
  }
}

}  // namespace

ParrySubstitution ParrySubstitution::parse_shorthand(const std::string& text) {
  if (text.rfind("simple:", 0) == 0) {
    auto alphas = parse_int_list(text.substr(7));
    const auto m = static_cast<std::int64_t>(alphas.size());
    return ParrySubstitution(Kind::Simple, m, 0, std::move(alphas));
  }
  if (text.rfind("nonsimple:", 0) == 0) {
    const std::string rest = text.substr(10);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw SyntaxError("shorthand: expected \"nonsimple:m=..,p=..:a0,a1,...\"");
    }
    const std::string params = rest.substr(0, colon);
    const auto comma = params.find(',');
    if (comma == std::string::npos) {
      throw SyntaxError("shorthand: expected both m= and p=");
    }
    const std::int64_t m = parse_kv(params.substr(0, comma), "m");
    const std::int64_t p = parse_kv(params.substr(comma + 1), "p");
    auto alphas = parse_int_list(rest.substr(colon + 1));
    return ParrySubstitution(Kind::NonSimple, m, p, std::move(alphas));
  }
  throw SyntaxError("shorthand must start with \"simple:\" or \"nonsimple:\"");
}

ParrySubstitution ParrySubstitution::parse(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SyntaxError("malformed JSON spec document");
    return from_json(doc);
  }
  return parse_shorthand(text);
}

nlohmann::json ParrySubstitution::to_json() const {
  nlohmann::json doc;
  doc["kind"] = kind_ == Kind::Simple ? "simple" : "nonsimple";
  doc["alphas"] = alphas_;
  if (kind_ == Kind::NonSimple) {
    doc["m"] = m_;
    doc["p"] = p_;
  }
  return doc;
}

void ParrySubstitution::validate() const {
  if (alphas_[0] < 1) {
    throw ConstraintViolation("alpha_0>=1", "alpha_0 must be at least 1");
  }
  for (std::size_t l = 1; l < alphas_.size(); ++l) {
    if (alphas_[l] > alphas_[0]) {
      throw ConstraintViolation("alpha_l<=alpha_0",
                                "alpha_" + std::to_string(l) + " exceeds alpha_0");
    }
  }
  if (kind_ == Kind::Simple) {
    if (alphas_.back() < 1) {
      throw ConstraintViolation("alpha_{m-1}>=1",
                                "simple substitutions require alpha_{m-1} >= 1");
    }
    // |phi(0)| = alpha_0 for m = 1; the fixed point's numeration needs
    // strictly increasing U_j, hence |phi(0)| >= 2.
    if (m_ == 1 && alphas_[0] < 2) {
      throw ConstraintViolation("alpha_0>=2",
                                "single-letter simple substitutions need alpha_0 >= 2");
    }
  } else {
    bool any = false;
    for (std::int64_t l = m_; l < m_ + p_; ++l) {
      if (alphas_[static_cast<std::size_t>(l)] >= 1) any = true;
    }
    if (!any) {
      throw ConstraintViolation("alpha_l>=1 tail",
                                "non-simple substitutions require alpha_l >= 1 for some "
                                "l in {m,...,m+p-1}");
    }
  }
}

Word ParrySubstitution::image(Letter l) const {
  const std::size_t a = alphabet_size();
  if (l >= a) throw RangeError("letter out of range");
  const std::uint64_t zeros = alphas_[l] > 0 ? static_cast<std::uint64_t>(alphas_[l]) : 0;
  Word w;
  const bool last = (static_cast<std::size_t>(l) + 1 == a);
  w.reserve(zeros + 1);
  w.assign(zeros, Letter{0});
  if (!last) {
    w.push_back(static_cast<Letter>(l + 1));
  } else if (kind_ == Kind::NonSimple) {
    w.push_back(static_cast<Letter>(m_));
  }
  return w;
}

std::int64_t ParrySubstitution::image_length(Letter l) const {
  const std::size_t a = alphabet_size();
  if (l >= a) throw RangeError("letter out of range");
  const bool last_simple = (kind_ == Kind::Simple) && (static_cast<std::size_t>(l) + 1 == a);
  return alphas_[l] + (last_simple ? 0 : 1);
}

Word ParrySubstitution::apply(const Word& w) const {
  std::size_t total = 0;
  for (Letter l : w) total += static_cast<std::size_t>(image_length(l));
  Word out;
  out.reserve(total);
  for (Letter l : w) {
    const std::size_t zeros = static_cast<std::size_t>(alphas_[l]);
    out.insert(out.end(), zeros, Letter{0});
    const bool last = (static_cast<std::size_t>(l) + 1 == alphabet_size());
    if (!last) {
      out.push_back(static_cast<Letter>(l + 1));
    } else if (kind_ == Kind::NonSimple) {
      out.push_back(static_cast<Letter>(m_));
    }
  }
  return out;
}

IncidenceMatrix ParrySubstitution::incidence_matrix() const {
  const std::size_t a = alphabet_size();
  IncidenceMatrix m;
  m.rows.assign(a, std::vector<std::int64_t>(a, 0));
  for (std::size_t l = 0; l < a; ++l) {
    m.rows[l][0] += alphas_[l];
    const bool last = (static_cast<std::size_t>(l) + 1 == a);
    if (!last) {
      m.rows[l][l + 1] += 1;
    } else if (kind_ == Kind::NonSimple) {
      m.rows[l][static_cast<std::size_t>(m_)] += 1;
    }
  }
  return m;
}

const Word& ImageCache::power(Letter l, std::size_t k, Limits lim) {
  const auto key = std::make_pair(l, k);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  if (power_image_length(sub_, l, k) > lim.max_word_len) {
    throw ResourceLimit("phi^k image exceeds the word length cap");
  }
  Word w;
  if (k == 0) {
    w = Word{l};
  } else {
    w = sub_.apply(power(l, k - 1, lim));
  }
  return memo_.emplace(key, std::move(w)).first->second;
}

mpz_class power_image_length(const ParrySubstitution& sub, Letter l, std::size_t k) {
  const std::size_t a = sub.alphabet_size();
  if (l >= a) throw RangeError("letter out of range");
  const IncidenceMatrix m = sub.incidence_matrix();
  std::vector<mpz_class> row(a, 0);
  row[l] = 1;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<mpz_class> next(a, 0);
    for (std::size_t i = 0; i < a; ++i) {
      if (row[i] == 0) continue;
      for (std::size_t j = 0; j < a; ++j) {
        next[j] += row[i] * m.rows[i][j];
      }
    }
    row.swap(next);
  }
  mpz_class total = 0;
  for (const auto& v : row) total += v;
  return total;
}

Word power_image(const ParrySubstitution& sub, Letter l, std::size_t k, Limits lim) {
  ImageCache cache(sub);
  return cache.power(l, k, lim);
}

FixedPointStream::FixedPointStream(const ParrySubstitution& sub) : sub_(sub) {
  images_.reserve(sub.alphabet_size());
  for (std::size_t l = 0; l < sub.alphabet_size(); ++l) {
    images_.push_back(sub.image(static_cast<Letter>(l)));
  }
}

const Word& FixedPointStream::prefix(std::int64_t len, Limits lim) {
  if (len < 0) throw RangeError("prefix length must be non-negative");
  if (len > lim.max_word_len) {
    throw ResourceLimit("prefix length exceeds the word length cap");
  }
  if (out_.empty() && len > 0) {
    out_ = images_[0];
    if (out_.size() < 2 || out_[0] != 0) {
      // Guarded by validate(); phi(0) must start with 0 and be non-trivial.
      throw ConstraintViolation("fixed point", "phi(0) does not extend the fixed point");
    }
    read_pos_ = 1;
  }
  while (static_cast<std::int64_t>(out_.size()) < len) {
    const Word& img = images_[out_[read_pos_++]];
    out_.insert(out_.end(), img.begin(), img.end());
  }
  return out_;
}

Word fixed_point_prefix(const ParrySubstitution& sub, std::int64_t len, Limits lim) {
  FixedPointStream stream(sub);
  Word w = stream.prefix(len, lim);
  w.resize(static_cast<std::size_t>(len));
  return w;
}

USequence::USequence(const ParrySubstitution& sub)
    : m_(sub.incidence_matrix()), alpha0_(sub.alpha0()) {
  std::vector<mpz_class> row0(m_.size(), 0);
  row0[0] = 1;
  rows_.push_back(std::move(row0));
  values_.emplace_back(1);
}

void USequence::grow_one() {
  const std::size_t a = m_.size();
  const auto& prev = rows_.back();
  std::vector<mpz_class> next(a, 0);
  for (std::size_t i = 0; i < a; ++i) {
    if (prev[i] == 0) continue;
    for (std::size_t j = 0; j < a; ++j) {
      next[j] += prev[i] * m_.rows[i][j];
    }
  }
  mpz_class total = 0;
  for (const auto& v : next) total += v;
  if (total <= values_.back()) {
    throw ConstraintViolation("U strictly increasing",
                              "U_j is not strictly increasing; degenerate substitution");
  }
  rows_.push_back(std::move(next));
  values_.push_back(std::move(total));
}

const mpz_class& USequence::value(std::size_t j) {
  while (values_.size() <= j) grow_one();
  return values_[j];
}

const std::vector<mpz_class>& USequence::parikh_row(std::size_t j) {
  while (rows_.size() <= j) grow_one();
  return rows_[j];
}

void USequence::extend_past(const mpz_class& n) {
  while (values_.back() <= n) grow_one();
}

std::int64_t USequence::value_i64(std::size_t j) {
  const mpz_class& v = value(j);
  if (!v.fits_slong_p()) return -1;
  return static_cast<std::int64_t>(v.get_si());
}

std::vector<mpz_class> USequence::values_upto(std::size_t k) {
  value(k);
  return std::vector<mpz_class>(values_.begin(), values_.begin() + k + 1);
}

USequence u_sequence(const ParrySubstitution& sub, std::size_t k) {
  USequence u(sub);
  u.value(k);
  return u;
}

std::vector<mpz_class> characteristic_polynomial(const IncidenceMatrix& m) {
  // Faddeev-LeVerrier; the divisions are exact over the integers.
  const std::size_t a = m.size();
  using Mat = std::vector<std::vector<mpz_class>>;
  auto mat_mul = [a](const Mat& x, const Mat& y) {
    Mat r(a, std::vector<mpz_class>(a, 0));
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t k2 = 0; k2 < a; ++k2) {
        if (x[i][k2] == 0) continue;
        for (std::size_t j = 0; j < a; ++j) r[i][j] += x[i][k2] * y[k2][j];
      }
    return r;
  };
  Mat mm(a, std::vector<mpz_class>(a));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) mm[i][j] = m.rows[i][j];

  std::vector<mpz_class> coeffs(a + 1);
  coeffs[0] = 1;
  Mat n = mm;
  for (std::size_t k = 1; k <= a; ++k) {
    mpz_class tr = 0;
    for (std::size_t i = 0; i < a; ++i) tr += n[i][i];
    mpz_class c;
    mpz_divexact_ui(c.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    c = -c;
    coeffs[k] = c;
    if (k < a) {
      for (std::size_t i = 0; i < a; ++i) n[i][i] += c;
      n = mat_mul(mm, n);
    }
  }
  return coeffs;
}

SpectralResult spectral_balance_check(const ParrySubstitution& sub, double tol) {
  if (tol <= 0) throw RangeError("tolerance must be positive");
  const auto poly = characteristic_polynomial(sub.incidence_matrix());
  const std::size_t deg = poly.size() - 1;
  if (deg <= 1) return SpectralResult::Certified;  // no non-dominant roots

  // Roots via the companion matrix of the monic characteristic polynomial.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) {
    const double ci = poly[deg - i].get_d();
    if (!std::isfinite(ci)) throw NumericalFailure("coefficient overflows double");
    companion(i, deg - 1) = -ci;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalue iteration did not converge");
  }
  std::vector<double> moduli;
  moduli.reserve(deg);
  for (std::size_t i = 0; i < deg; ++i) {
    moduli.push_back(std::abs(solver.eigenvalues()[static_cast<Eigen::Index>(i)]));
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  for (std::size_t i = 1; i < moduli.size(); ++i) {
    if (!(moduli[i] < 1.0 - tol)) return SpectralResult::Inconclusive;
  }
  return SpectralResult::Certified;
}

std::string format_word(const Word& w, std::size_t alphabet_size) {
  std::string out;
  if (alphabet_size <= 10) {
    out.reserve(w.size());
    for (Letter l : w) out.push_back(static_cast<char>('0' + l));
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(static_cast<int>(w[i]));
    }
  }
  return out;
}

}  // namespace parry
