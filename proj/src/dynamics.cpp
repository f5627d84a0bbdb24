#include "hdnba/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace hdnba {

PopulationParams PopulationParams::from_config(const Config& cfg) {
  PopulationParams p;
  p.tau_e = cfg.get("tau_e", p.tau_e);
  p.tau_i = cfg.get("tau_i", p.tau_i);
  p.theta = cfg.get("theta", p.theta);
  p.sigma = cfg.get("sigma", p.sigma);
  p.w_ee = cfg.get("w_ee", p.w_ee);
  p.w_ei = cfg.get("w_ei", p.w_ei);
  p.w_ie = cfg.get("w_ie", p.w_ie);
  p.w_ii = cfg.get("w_ii", p.w_ii);
  p.max_rate = cfg.get("max_rate", p.max_rate);
  p.validate();
  return p;
}

void PopulationParams::validate() const {
  if (!(tau_e > 0.0) || !(tau_i > 0.0)) throw GraphError("time constants must be positive");
  if (!(sigma > 0.0)) throw GraphError("gain slope must be positive");
  if (max_rate != 100.0) throw GraphError("max_rate must be 100 spikes/ms");
}

double gain(const PopulationParams& p, double x) {
  return p.max_rate / (1.0 + std::exp(-(x - p.theta) / p.sigma));
}

namespace {

inline void update_unit(const PopulationParams& p, double input, double de, double di,
                        double& e, double& i) {
  double xe = input + p.w_ee * e - p.w_ei * i;
  double xi = input + p.w_ie * e - p.w_ii * i;
  double se = gain(p, xe);
  double si = gain(p, xi);
  e = std::clamp(se + (e - se) * de, 0.0, p.max_rate);
  i = std::clamp(si + (i - si) * di, 0.0, p.max_rate);
}

}  // namespace

void wc_update(const PopulationParams& p, double input, double dt, double& e, double& i) {
  update_unit(p, input, std::exp(-dt / p.tau_e), std::exp(-dt / p.tau_i), e, i);
}

void rest_state(const PopulationParams& p, double& e, double& i) {
  e = 0.0;
  i = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double pe = e, pi = i;
    wc_update(p, 0.0, 1.0, e, i);
    if (pe == e && pi == i) break;
  }
}

Network::Network(PopulationParams defaults) {
  defaults.validate();
  params_.push_back(defaults);
  double e, i;
  rest_state(defaults, e, i);
  rest_e_.push_back(e);
  rest_i_.push_back(i);
  decay_e_.push_back(std::exp(-1.0 / defaults.tau_e));
  decay_i_.push_back(std::exp(-1.0 / defaults.tau_i));
}

PopId Network::create_population(Sign output, uint8_t tag) {
  return create_population(params_.front(), output, tag);
}

PopId Network::create_population(const PopulationParams& params, Sign output, uint8_t tag) {
  params.validate();
  size_t idx = 0;
  while (idx < params_.size() && !(params_[idx] == params)) ++idx;
  if (idx == params_.size()) {
    params_.push_back(params);
    double e, i;
    rest_state(params, e, i);
    rest_e_.push_back(e);
    rest_i_.push_back(i);
    decay_e_.push_back(std::exp(-1.0 / params.tau_e));
    decay_i_.push_back(std::exp(-1.0 / params.tau_i));
  }
  if (idx != 0) ++overrides_;
  PopId id = static_cast<PopId>(out_sign_.size());
  e_.push_back(rest_e_[idx]);
  i_.push_back(rest_i_[idx]);
  param_idx_.push_back(static_cast<uint16_t>(idx));
  out_sign_.push_back(output);
  tag_.push_back(tag);
  ext_.push_back(0.0);
  csr_dirty_ = true;
  return id;
}

void Network::check(PopId p) const {
  if (p >= size()) throw GraphError("dangling population handle " + std::to_string(p));
}

LinkId Network::connect(PopId src, PopId dst, double weight, Sign sign) {
  check(src);
  check(dst);
  if (src == dst) throw GraphError("self-links are not allowed");
  if (!(weight >= 0.0)) throw GraphError("link weight must be non-negative");
  links_.push_back({src, dst, weight, sign});
  csr_dirty_ = true;
  return static_cast<LinkId>(links_.size() - 1);
}

void Network::set_input(PopId p, double level) {
  check(p);
  ext_[p] = level;
}

void Network::clear_inputs() { std::fill(ext_.begin(), ext_.end(), 0.0); }

double Network::baseline(PopId p) const {
  check(p);
  if (settled_e_.size() == size())
    return out_sign_[p] == Sign::Excitatory ? settled_e_[p] : settled_i_[p];
  return out_sign_[p] == Sign::Excitatory ? rest_e_[param_idx_[p]] : rest_i_[param_idx_[p]];
}

void Network::reset_state() {
  bool settled = settled_e_.size() == size();
  for (size_t k = 0; k < size(); ++k) {
    e_[k] = settled ? settled_e_[k] : rest_e_[param_idx_[k]];
    i_[k] = settled ? settled_i_[k] : rest_i_[param_idx_[k]];
  }
  clock_ = 0;
}

int Network::settle(int max_ticks, double tol) {
  clear_inputs();
  int t = 0;
  while (t < max_ticks) {
    auto e0 = e_, i0 = i_;
    step();
    ++t;
    double d = 0;
    for (size_t k = 0; k < size(); ++k)
      d = std::max({d, std::abs(e_[k] - e0[k]), std::abs(i_[k] - i0[k])});
    if (d <= tol) break;
  }
  settled_e_ = e_;
  settled_i_ = i_;
  clock_ = 0;
  return t;
}

void Network::build_csr() {
  size_t n = size();
  auto build = [&](Sign sign, std::vector<uint32_t>& off, std::vector<uint32_t>& src,
                   std::vector<double>& w) {
    off.assign(n + 1, 0);
    for (const auto& l : links_)
      if (l.sign == sign) ++off[l.dst + 1];
    for (size_t k = 0; k < n; ++k) off[k + 1] += off[k];
    src.assign(off[n], 0);
    w.assign(off[n], 0.0);
    std::vector<uint32_t> fill(off.begin(), off.end() - 1);
    for (const auto& l : links_) {
      if (l.sign != sign) continue;
      uint32_t slot = fill[l.dst]++;
      src[slot] = l.src;
      w[slot] = l.weight;
    }
  };
  build(Sign::Excitatory, exc_off_, exc_src_, exc_w_);
  build(Sign::Inhibitory, inh_off_, inh_src_, inh_w_);
  next_e_.assign(n, 0.0);
  next_i_.assign(n, 0.0);
  csr_dirty_ = false;
}

void Network::step() {
  if (csr_dirty_) build_csr();
  size_t n = size();
  const double* e = e_.data();
  const double* ir = i_.data();
  for (size_t k = 0; k < n; ++k) {
    double in = ext_[k];
    for (uint32_t s = exc_off_[k]; s < exc_off_[k + 1]; ++s) in += exc_w_[s] * e[exc_src_[s]];
    for (uint32_t s = inh_off_[k]; s < inh_off_[k + 1]; ++s) in -= inh_w_[s] * ir[inh_src_[s]];
    double ek = e[k], ik = ir[k];
    uint16_t pi = param_idx_[k];
    update_unit(params_[pi], in, decay_e_[pi], decay_i_[pi], ek, ik);
    next_e_[k] = ek;
    next_i_[k] = ik;
  }
  e_.swap(next_e_);
  i_.swap(next_i_);
  ++clock_;
}

}  // namespace hdnba
