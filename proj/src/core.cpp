#include "sgdavg/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <type_traits>

namespace sgdavg {

bool is_finite(const WeightVector &v) { return v.allFinite(); }

ProjectionDomain make_ball(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error("ball radius must be positive and finite");
  return Ball{radius};
}

void project_inplace(const ProjectionDomain &domain, WeightVector &v) {
  if (!v.allFinite())
    throw Error("non-finite vector");
  if (const auto *ball = std::get_if<Ball>(&domain)) {
    const double norm = v.norm();
    if (norm > ball->radius)
      v *= ball->radius / norm;
  }
}

WeightVector project(const ProjectionDomain &domain, const WeightVector &v) {
  WeightVector out = v;
  project_inplace(domain, out);
  return out;
}

std::string domain_name(const ProjectionDomain &domain) {
  if (const auto *ball = std::get_if<Ball>(&domain))
    return "ball:" + format_double(ball->radius);
  return "whole";
}

namespace {

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw Error("strong-convexity constant mu must be positive and finite");
}

} // namespace

StepSchedule make_classical(double mu) {
  check_mu(mu);
  return Classical{mu};
}

StepSchedule make_proposed(double mu) {
  check_mu(mu);
  return Proposed{mu};
}

StepSchedule make_general(double mu, double c, double b) {
  check_mu(mu);
  if (!(c > 0.5) || !std::isfinite(c))
    throw Error("general schedule requires c > 1/2");
  if (!(b >= 0.0) || !std::isfinite(b))
    throw Error("general schedule requires b >= 0");
  return General{mu, c, b};
}

double step_size(const StepSchedule &schedule, std::size_t t) {
  if (t == 0)
    throw Error("schedules are defined for t ≥ 1");
  const auto td = static_cast<double>(t);
  return std::visit(
      [td](const auto &s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Classical>)
          return 1.0 / (s.mu * td);
        else if constexpr (std::is_same_v<S, Proposed>)
          return 2.0 / (s.mu * (td + 1.0));
        else
          return s.c / (s.mu * (td + s.b));
      },
      schedule);
}

double schedule_mu(const StepSchedule &schedule) {
  return std::visit([](const auto &s) { return s.mu; }, schedule);
}

StepSchedule with_mu(const StepSchedule &schedule, double mu) {
  check_mu(mu);
  return std::visit(
      [mu](auto s) -> StepSchedule {
        s.mu = mu;
        return s;
      },
      schedule);
}

std::string schedule_name(const StepSchedule &schedule) {
  return std::visit(
      [](const auto &s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Classical>)
          return "classical";
        else if constexpr (std::is_same_v<S, Proposed>)
          return "proposed";
        else
          return "general:" + format_double(s.c) + "," + format_double(s.b);
      },
      schedule);
}

StepSchedule parse_schedule(const std::string &name, double mu) {
  if (name == "classical")
    return make_classical(mu);
  if (name == "proposed")
    return make_proposed(mu);
  constexpr std::string_view prefix = "general:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string_view rest = std::string_view(name).substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw Error("general schedule must be written general:<c>,<b>");
    const double c = parse_double(rest.substr(0, comma), "schedule constant c");
    const double b = parse_double(rest.substr(comma + 1), "schedule offset b");
    return make_general(mu, c, b);
  }
  throw Error("unknown step schedule '" + name + "'");
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc())
    throw Error("cannot format floating-point value");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text, const std::string &what) {
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw Error("cannot parse " + what + " from '" + std::string(text) + "'");
  return value;
}

} // namespace sgdavg
