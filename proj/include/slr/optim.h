#ifndef SLR_OPTIM_H_
#define SLR_OPTIM_H_

#include <vector>

#include <Eigen/Dense>

#include "slr/config.h"
#include "slr/param.h"

namespace slr {

// Linear ramp 0 -> peak over the warmup steps, constant, then peak -> 0 over
// the final warmdown steps.
class LinearSchedule {
 public:
  LinearSchedule(double peak, long warmup_steps, long warmdown_steps,
                 long total_steps);

  double operator()(long step) const;
  long total_steps() const { return total_; }

 private:
  double peak_;
  long warmup_, warmdown_, total_;
};

// Epoch-level warmup/warmdown from the config, in optimizer steps.
LinearSchedule build_schedule(const TrainConfig& config, long steps_per_epoch);

// Adam with decoupled weight decay.
class AdamW {
 public:
  AdamW(const std::vector<Param*>& params, double weight_decay,
        double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(double learning_rate);

 private:
  std::vector<Param*> params_;
  std::vector<Eigen::MatrixXd> m_, v_;
  double weight_decay_, beta1_, beta2_, eps_;
  long t_ = 0;
};

// Rescales gradients so their global norm is at most max_norm. Returns the
// norm before clipping.
double clip_grad_norm(const std::vector<Param*>& params, double max_norm);

}  // namespace slr

#endif  // SLR_OPTIM_H_
