#ifndef SGDAVG_CORE_HPP_
#define SGDAVG_CORE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace sgdavg {

/// Dense iterate / average vector. Samples stay sparse; only w is dense.
using WeightVector = Eigen::VectorXd;

/// Raised for invalid arguments and violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_finite(const WeightVector &v);

//////////////////////////////////////////
//          Projection domains
//////////////////////////////////////////

struct WholeSpace {};

struct Ball {
  double radius;
};

using ProjectionDomain = std::variant<WholeSpace, Ball>;

ProjectionDomain make_ball(double radius);

/// Euclidean projection onto the domain. Throws on non-finite input.
WeightVector project(const ProjectionDomain &domain, const WeightVector &v);

/// In-place variant used by the solver hot loop.
void project_inplace(const ProjectionDomain &domain, WeightVector &v);

std::string domain_name(const ProjectionDomain &domain);

//////////////////////////////////////////
//          Step-size schedules
//////////////////////////////////////////

// gamma_t = 1 / (mu t)
struct Classical {
  double mu;
};

// gamma_t = 2 / (mu (t + 1))
struct Proposed {
  double mu;
};

// gamma_t = c / (mu (t + b)); c = 1, b = 0 is Classical, c = 2, b = 1 is Proposed
struct General {
  double mu;
  double c;
  double b;
};

using StepSchedule = std::variant<Classical, Proposed, General>;

/// Validating constructors. mu > 0, c > 1/2, b >= 0.
StepSchedule make_classical(double mu);
StepSchedule make_proposed(double mu);
StepSchedule make_general(double mu, double c, double b);

double step_size(const StepSchedule &schedule, std::size_t t);

double schedule_mu(const StepSchedule &schedule);

/// Same schedule kind with a different strong-convexity constant.
StepSchedule with_mu(const StepSchedule &schedule, double mu);

/// CLI spelling: "classical", "proposed", "general:<c>,<b>".
std::string schedule_name(const StepSchedule &schedule);

/// Parses the CLI spelling; mu is supplied separately since it is usually
/// only known after the dataset is loaded.
StepSchedule parse_schedule(const std::string &name, double mu);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Strict full-string double parse; throws Error naming `what` on failure.
double parse_double(std::string_view text, const std::string &what);

} // namespace sgdavg

#endif // SGDAVG_CORE_HPP_
