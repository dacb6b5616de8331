// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgraph/rates.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace qg {

namespace {

bool in_unit(double x) { return x > 0.0 && x <= 1.0; }

bool power_of_two(int d) { return d >= 2 && std::has_single_bit(static_cast<unsigned>(d)); }

int qubits_per_photon(int d) { return std::countr_zero(static_cast<unsigned>(d)); }

int photons_for(int n, int d) {
  const int k = qubits_per_photon(d);
  return 2 * ((n + 2 * k - 1) / (2 * k));
}

}  // namespace

RateParams RateParams::low_loss() {
  RateParams p;
  p.eta = 0.99;
  p.collection = 0.5;
  return p;
}

void RateParams::validate() const {
  if (!in_unit(s) || !in_unit(p_fuse) || !in_unit(eta) || !in_unit(collection)) {
    throw Error("rate probabilities must lie in (0, 1]");
  }
  if (!(rep_rate > 0.0)) throw Error("repetition rate must be positive");
  if (!power_of_two(d_max)) throw Error("d_max must be a power of two");
  if (photon_max < 2) throw Error("photon_max must be at least 2");
}

std::string RateEncoding::str() const {
  return kind == Kind::Qubit ? "qubit" : "qudit(" + std::to_string(d) + ")";
}

double GhzRate::factor(const std::string& name) const {
  for (const auto& f : factors) {
    if (f.name == name) return f.value;
  }
  throw Error("no rate factor named " + name);
}

nlohmann::json GhzRate::to_json() const {
  nlohmann::json f = nlohmann::json::object();
  for (const auto& x : factors) f[x.name] = x.value;
  return {{"n", n},         {"encoding", encoding.str()}, {"d", d},         {"photons", photons},
          {"pairs", pairs}, {"fusions", fusions},         {"rate_hz", rate_hz}, {"factors", f}};
}

bool rate_feasible(int n, const RateEncoding& encoding, const RateParams& params) {
  if (n < 2) return false;
  if (encoding.kind == RateEncoding::Kind::Qubit) return true;
  if (!power_of_two(encoding.d) || encoding.d > params.d_max) return false;
  return photons_for(n, encoding.d) <= params.photon_max;
}

GhzRate ghz_rate(int n, const RateEncoding& encoding, const RateParams& params) {
  params.validate();
  if (!rate_feasible(n, encoding, params)) {
    throw Error("infeasible encoding " + encoding.str() + " for " + std::to_string(n) + " qubits");
  }
  GhzRate r;
  r.n = n;
  r.encoding = encoding;
  r.d = encoding.kind == RateEncoding::Kind::Qubit ? 2 : encoding.d;
  if (encoding.kind == RateEncoding::Kind::Qubit) {
    // One qubit per photon, one MZI per photon.
    r.photons = n + n % 2;
    r.pairs = r.photons / 2;
    r.fusions = r.pairs - 1;
    r.factors = {{"rep_rate", params.rep_rate},
                 {"source", std::pow(params.s, r.pairs)},
                 {"fusion", std::pow(params.p_fuse, r.fusions)},
                 {"collection", std::pow(params.collection, r.photons)},
                 {"mesh", std::pow(params.eta, r.photons)}};
  } else {
    r.photons = photons_for(n, r.d);
    r.pairs = r.photons / 2;
    r.fusions = r.pairs - 1;
    r.factors = {{"rep_rate", params.rep_rate},
                 {"source", std::pow(params.s, r.pairs)},
                 {"fusion", std::pow(params.p_fuse, r.fusions)},
                 {"collection", std::pow(params.collection, r.photons)},
                 {"mesh", std::pow(params.eta, (r.d - 1) * r.photons)}};
  }
  r.rate_hz = 1.0;
  for (const auto& f : r.factors) r.rate_hz *= f.value;
  return r;
}

std::vector<RateComparison> compare_encodings(int n_min, int n_max, const RateParams& params) {
  params.validate();
  std::vector<RateComparison> out;
  for (int n = std::max(n_min, 2); n <= n_max; ++n) {
    RateComparison c;
    c.n = n;
    c.qubit = ghz_rate(n, RateEncoding::qubit(), params);
    for (int d = 2; d <= params.d_max; d *= 2) {
      const RateEncoding e = RateEncoding::qudit(d);
      if (!rate_feasible(n, e, params)) continue;
      GhzRate r = ghz_rate(n, e, params);
      if (!c.qudit_feasible || r.rate_hz > c.best_qudit.rate_hz) {
        c.best_qudit = std::move(r);
        c.qudit_feasible = true;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string rates_csv(const std::vector<RateComparison>& table) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "n,encoding,d,photons,rate_hz,rep_rate,source,fusion,collection,mesh\n";
  auto row = [&](const GhzRate& r) {
    os << r.n << ',' << r.encoding.str() << ',' << r.d << ',' << r.photons << ',' << r.rate_hz;
    for (const auto& f : r.factors) os << ',' << f.value;
    os << '\n';
  };
  for (const auto& c : table) {
    row(c.qubit);
    if (c.qudit_feasible) row(c.best_qudit);
  }
  return os.str();
}

}  // namespace qg
