#ifndef SLR_PARAM_H_
#define SLR_PARAM_H_

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace slr {

// A trainable tensor and its accumulated gradient.
struct Param {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  Param() = default;
  Param(std::string n, int rows, int cols)
      : name(std::move(n)),
        value(Eigen::MatrixXd::Zero(rows, cols)),
        grad(Eigen::MatrixXd::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
  // Gaussian init with the given standard deviation.
  void randomize(double stddev, std::mt19937_64& rng);
};

nlohmann::json to_json(const Param& p);
// Restores values into `p`; throws LoadError on a shape mismatch.
void load_json(Param& p, const nlohmann::json& j);

double grad_norm(const std::vector<Param*>& params);
void scale_grads(const std::vector<Param*>& params, double factor);
bool all_finite(const std::vector<Param*>& params);

}  // namespace slr

#endif  // SLR_PARAM_H_
