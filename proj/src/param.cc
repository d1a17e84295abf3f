#include "slr/param.h"

#include <cmath>

#include "slr/error.h"

namespace slr {

void Param::randomize(double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index i = 0; i < value.size(); ++i) value.data()[i] = dist(rng);
}

nlohmann::json to_json(const Param& p) {
  std::vector<double> data(p.value.data(), p.value.data() + p.value.size());
  return {{"rows", p.value.rows()}, {"cols", p.value.cols()}, {"data", data}};
}

void load_json(Param& p, const nlohmann::json& j) {
  auto rows = j.at("rows").get<Eigen::Index>();
  auto cols = j.at("cols").get<Eigen::Index>();
  if (rows != p.value.rows() || cols != p.value.cols()) {
    throw LoadError("parameter " + p.name + " has shape " +
                    std::to_string(rows) + "x" + std::to_string(cols) +
                    ", expected " + std::to_string(p.value.rows()) + "x" +
                    std::to_string(p.value.cols()));
  }
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != p.value.size()) {
    throw LoadError("parameter " + p.name + " has wrong element count");
  }
  std::copy(data.begin(), data.end(), p.value.data());
  p.grad = Eigen::MatrixXd::Zero(rows, cols);
}

double grad_norm(const std::vector<Param*>& params) {
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

void scale_grads(const std::vector<Param*>& params, double factor) {
  for (Param* p : params) p->grad *= factor;
}

bool all_finite(const std::vector<Param*>& params) {
  for (const Param* p : params) {
    if (!p->value.allFinite()) return false;
  }
  return true;
}

}  // namespace slr
