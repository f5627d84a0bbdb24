#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdnba/config.hpp"

namespace hdnba {

using PopId = uint32_t;
using LinkId = uint32_t;

enum class Sign : uint8_t { Excitatory, Inhibitory };

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wilson-Cowan unit parameters. Gain function is the logistic
// S(x) = 1 / (1 + exp(-(x - theta) / sigma)), scaled by max_rate.
struct PopulationParams {
  double tau_e = 5.0;
  double tau_i = 2.5;
  double theta = 50.0;
  double sigma = 5.0;
  double w_ee = 0.1;
  double w_ei = 0.1;  // i -> e
  double w_ie = 0.1;  // e -> i
  double w_ii = 0.0;
  double max_rate = 100.0;

  static PopulationParams from_config(const Config& cfg);
  void validate() const;
  bool operator==(const PopulationParams&) const = default;
};

struct Link {
  PopId src;
  PopId dst;
  double weight;
  Sign sign;
};

double gain(const PopulationParams& p, double x);

// One explicit 1 ms update of a single unit (exponential Euler, input held
// constant over the step, rates clipped to [0, max_rate]).
void wc_update(const PopulationParams& p, double input, double dt, double& e, double& i);

// Rest state of an isolated unit with zero input.
void rest_state(const PopulationParams& p, double& e, double& i);

class Network {
 public:
  explicit Network(PopulationParams defaults = {});

  PopId create_population(Sign output = Sign::Excitatory, uint8_t tag = 0);
  PopId create_population(const PopulationParams& params, Sign output = Sign::Excitatory,
                          uint8_t tag = 0);
  LinkId connect(PopId src, PopId dst, double weight, Sign sign);

  // External input (spikes/ms), delivered to both sub-populations and held
  // until changed.
  void set_input(PopId p, double level);
  double input(PopId p) const { return ext_[p]; }
  void clear_inputs();

  void step();
  void reset_state();
  // Runs with zero input until no rate moves by more than tol; the result
  // becomes the baseline and the reset state. Returns ticks used.
  int settle(int max_ticks = 2000, double tol = 1e-12);

  size_t size() const { return out_sign_.size(); }
  int64_t clock() const { return clock_; }
  double e(PopId p) const { return e_[p]; }
  double i(PopId p) const { return i_[p]; }
  // Rate seen by downstream populations: e for excitatory output, i otherwise.
  double output(PopId p) const { return out_sign_[p] == Sign::Excitatory ? e(p) : i(p); }
  Sign output_sign(PopId p) const { return out_sign_[p]; }
  uint8_t tag(PopId p) const { return tag_[p]; }
  void set_tag(PopId p, uint8_t t) { tag_[p] = t; }
  double baseline(PopId p) const;

  const std::vector<Link>& links() const { return links_; }
  const PopulationParams& defaults() const { return params_.front(); }
  const PopulationParams& params_of(PopId p) const { return params_[param_idx_[p]]; }
  size_t override_count() const { return overrides_; }

  void check(PopId p) const;

 private:
  void build_csr();

  std::vector<PopulationParams> params_;
  std::vector<double> rest_e_, rest_i_;
  std::vector<double> settled_e_, settled_i_;
  std::vector<double> decay_e_, decay_i_;
  std::vector<uint16_t> param_idx_;
  std::vector<Sign> out_sign_;
  std::vector<uint8_t> tag_;
  std::vector<double> ext_;
  std::vector<double> e_, i_, next_e_, next_i_;
  std::vector<Link> links_;
  // Incoming links grouped by target; excitatory ones read e, inhibitory ones i.
  std::vector<uint32_t> exc_off_, exc_src_, inh_off_, inh_src_;
  std::vector<double> exc_w_, inh_w_;
  bool csr_dirty_ = true;
  int64_t clock_ = 0;
  size_t overrides_ = 0;
};

}  // namespace hdnba
