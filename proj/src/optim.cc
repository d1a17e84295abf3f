#include "slr/optim.h"

#include <cmath>

#include "slr/error.h"

namespace slr {

LinearSchedule::LinearSchedule(double peak, long warmup_steps,
                               long warmdown_steps, long total_steps)
    : peak_(peak), warmup_(warmup_steps), warmdown_(warmdown_steps),
      total_(total_steps) {
  if (warmup_ < 0 || warmdown_ < 0 || warmup_ + warmdown_ > total_) {
    throw InvalidArgument("warmup + warmdown must fit inside the schedule");
  }
}

double LinearSchedule::operator()(long step) const {
  if (step < 0) return 0.0;
  if (step < warmup_) return peak_ * static_cast<double>(step) / warmup_;
  long down_start = total_ - warmdown_;
  if (step >= down_start && warmdown_ > 0) {
    double left = static_cast<double>(total_ - step) / warmdown_;
    return peak_ * std::max(0.0, left);
  }
  return peak_;
}

LinearSchedule build_schedule(const TrainConfig& config, long steps_per_epoch) {
  if (config.warmup_epochs + config.warmdown_epochs > config.epochs) {
    throw InvalidArgument("warmup + warmdown epochs exceed total epochs");
  }
  if (steps_per_epoch < 1) throw InvalidArgument("steps per epoch must be >= 1");
  return LinearSchedule(config.learning_rate,
                        config.warmup_epochs * steps_per_epoch,
                        config.warmdown_epochs * steps_per_epoch,
                        config.epochs * steps_per_epoch);
}

AdamW::AdamW(const std::vector<Param*>& params, double weight_decay,
             double beta1, double beta2, double eps)
    : params_(params), weight_decay_(weight_decay), beta1_(beta1),
      beta2_(beta2), eps_(eps) {
  for (const Param* p : params_) {
    m_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
  }
}

void AdamW::step(double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t k = 0; k < params_.size(); ++k) {
    Param& p = *params_[k];
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * p.grad;
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
    p.value *= 1.0 - learning_rate * weight_decay_;
    p.value.array() -= learning_rate * (m_[k].array() / c1) /
                       ((v_[k].array() / c2).sqrt() + eps_);
  }
}

double clip_grad_norm(const std::vector<Param*>& params, double max_norm) {
  double norm = grad_norm(params);
  if (norm > max_norm) scale_grads(params, max_norm / norm);
  return norm;
}

}  // namespace slr
