#pragma once

#include "sdcbf/types.hpp"

#include <memory>
#include <string>

namespace sdcbf {

/// Continuous-time plant seen only through its rate x' = F(x, u).
class PlantModel {
 public:
  virtual ~PlantModel() = default;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual Vector rate(const Vector& x, const Vector& u) const = 0;
};

/// Control-affine plant x' = f(x) + g(x) u with the split exposed. Only the
/// simulator, the baseline controller and test oracles use f and g.
class ControlAffinePlant : public PlantModel {
 public:
  virtual Vector f(const Vector& x) const = 0;
  virtual Matrix g(const Vector& x) const = 0;
  Vector rate(const Vector& x, const Vector& u) const override;
};

/// Separately excited DC motor, x = (rotor current, angular velocity),
/// u = stator current:
///   x1' = -39.3153 x1 + 19.1083 - 32.2293 x2 u
///   x2' = -1.6599 x2 - 3.3333 + 22.9478 x1 u
class DcMotor final : public ControlAffinePlant {
 public:
  std::size_t state_dim() const override { return 2; }
  std::size_t input_dim() const override { return 1; }
  Vector f(const Vector& x) const override;
  Matrix g(const Vector& x) const override;
  Vector rate(const Vector& x, const Vector& u) const override;
};

/// x' = A x + c + B u.
class AffinePlant final : public ControlAffinePlant {
 public:
  AffinePlant(Matrix a, Vector c, Matrix b);
  std::size_t state_dim() const override { return static_cast<std::size_t>(a_.rows()); }
  std::size_t input_dim() const override { return static_cast<std::size_t>(b_.cols()); }
  Vector f(const Vector& x) const override;
  Matrix g(const Vector& x) const override;

 private:
  Matrix a_;
  Vector c_;
  Matrix b_;
};

/// Hides the f/g split of another plant: only rate() is reachable.
class RateOnlyPlant final : public PlantModel {
 public:
  explicit RateOnlyPlant(const PlantModel& inner) : inner_(inner) {}
  std::size_t state_dim() const override { return inner_.state_dim(); }
  std::size_t input_dim() const override { return inner_.input_dim(); }
  Vector rate(const Vector& x, const Vector& u) const override { return inner_.rate(x, u); }

 private:
  const PlantModel& inner_;
};

/// Built-in plants by config name ("dc_motor").
std::unique_ptr<ControlAffinePlant> make_plant(const std::string& name);

struct PlantSuprema {
  double beta_norm = 0.0;  // sup ||f(x) + g(x) u||_2
  double g_sup = 0.0;      // sup ||g(x)||_2 (spectral norm)
};

/// Dense-grid evaluation of the suprema over operating_box x input_box using
/// `points_per_axis` points per coordinate (box vertices included).
PlantSuprema grid_suprema(const ControlAffinePlant& plant, const Box& operating_box,
                          const Box& input_box, std::size_t points_per_axis);

}  // namespace sdcbf
