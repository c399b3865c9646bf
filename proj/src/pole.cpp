#include "rku/pole.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace rku {

PolePlan::PolePlan(std::vector<Pole> poles, Repetition repetition, Ordering ordering, Index cycles)
    : base_(ordering == Ordering::leja ? leja_sequence(poles) : std::move(poles)),
      repetition_(repetition),
      ordering_(ordering),
      cycles_(cycles) {
  if (base_.empty()) throw Error(ErrorCode::invalid_argument, "pole plan needs at least one pole");
  if (cycles < 0) throw Error(ErrorCode::invalid_argument, "negative cycle count");
}

Index PolePlan::capacity() const {
  if (repetition_ == Repetition::as_given) return Index(base_.size());
  return cycles_ == 0 ? -1 : cycles_ * Index(base_.size());
}

Pole PolePlan::at(Index j) const {
  const Index cap = capacity();
  if (j < 0 || (cap >= 0 && j >= cap)) {
    throw Error(ErrorCode::invalid_argument, "pole index " + std::to_string(j) + " beyond plan length");
  }
  return base_[std::size_t(j % Index(base_.size()))];
}

std::vector<Pole> PolePlan::expand(Index m) const {
  std::vector<Pole> out;
  out.reserve(std::size_t(std::max<Index>(m, 0)));
  for (Index j = 0; j < m; ++j) out.push_back(at(j));
  return out;
}

bool PolePlan::conjugate_closed() const {
  std::vector<bool> used(base_.size(), false);
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i].is_infinite() || used[i]) continue;
    const Scalar target = std::conj(base_[i].value());
    bool found = false;
    for (std::size_t k = 0; k < base_.size(); ++k) {
      if (used[k] || base_[k].is_infinite() || base_[k].value() != target) continue;
      if (k == i && target != base_[i].value()) continue;
      used[k] = true;
      found = true;
      break;
    }
    if (!found) return false;
    used[i] = true;
  }
  return true;
}

std::string PolePlan::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& p : base_) {
    if (p.is_infinite()) {
      out << "inf\n";
    } else if (p.value().imag() == 0.0) {
      out << p.value().real() << '\n';
    } else {
      out << p.value().real() << ' ' << p.value().imag() << '\n';
    }
  }
  return out.str();
}

PolePlan PolePlan::from_text(const std::string& text, Repetition repetition) {
  std::vector<Pole> poles;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "inf" || first == "Inf" || first == "INF") {
      poles.push_back(Pole::infinity());
      continue;
    }
    try {
      double re = std::stod(first);
      double im = 0.0;
      std::string second;
      if (fields >> second) im = std::stod(second);
      poles.push_back(Pole::finite({re, im}));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad pole on line " + std::to_string(lineno));
    }
  }
  return PolePlan(std::move(poles), repetition);
}

std::vector<Pole> leja_sequence(const std::vector<Pole>& poles) {
  std::vector<Pole> finite;
  std::vector<Pole> infinite;
  for (const auto& p : poles) (p.is_infinite() ? infinite : finite).push_back(p);

  // Larger score wins; near-ties fall back to (imag, real) ascending.
  auto better = [](double score, Scalar z, double best_score, Scalar best_z) {
    const double slack = 1e-12 * std::max({std::abs(score), std::abs(best_score), 1.0});
    if (std::isinf(score) || std::isinf(best_score) || std::abs(score - best_score) > slack) {
      return score > best_score;
    }
    if (z.imag() != best_z.imag()) return z.imag() < best_z.imag();
    return z.real() < best_z.real();
  };

  std::vector<Pole> out;
  std::vector<bool> taken(finite.size(), false);
  std::vector<double> log_product(finite.size(), 0.0);
  for (std::size_t step = 0; step < finite.size(); ++step) {
    std::size_t best = finite.size();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < finite.size(); ++i) {
      if (taken[i]) continue;
      const double score = step == 0 ? std::abs(finite[i].value()) : log_product[i];
      if (best == finite.size() || better(score, finite[i].value(), best_score, finite[best].value())) {
        best = i;
        best_score = score;
      }
    }
    taken[best] = true;
    out.push_back(finite[best]);
    for (std::size_t i = 0; i < finite.size(); ++i) {
      if (!taken[i]) log_product[i] += std::log(std::abs(finite[i].value() - finite[best].value()));
    }
  }
  out.insert(out.end(), infinite.begin(), infinite.end());
  return out;
}

PolePlan leja_order(const std::vector<Pole>& poles) { return PolePlan(leja_sequence(poles)); }

}  // namespace rku
