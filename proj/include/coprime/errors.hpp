#pragma once

#include <stdexcept>
#include <string>

namespace coprime {

struct SingularCurve : std::domain_error {
  explicit SingularCurve(const std::string& what) : std::domain_error(what) {}
};

struct BadReduction : std::domain_error {
  std::uint64_t prime;
  explicit BadReduction(std::uint64_t p)
      : std::domain_error("bad reduction at p=" + std::to_string(p)), prime(p) {}
};

struct Unfactorable : std::runtime_error {
  explicit Unfactorable(const std::string& what) : std::runtime_error(what) {}
};

struct EnumerationTooLarge : std::domain_error {
  explicit EnumerationTooLarge(const std::string& what) : std::domain_error(what) {}
};

struct NotSerreCurve : std::domain_error {
  explicit NotSerreCurve(const std::string& what) : std::domain_error(what) {}
};

struct NotSerrePair : std::domain_error {
  explicit NotSerrePair(const std::string& what) : std::domain_error(what) {}
};

}  // namespace coprime
