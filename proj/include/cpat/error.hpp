#pragma once

#include <stdexcept>
#include <string>

namespace cpat {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A cross-ratio or fourth-point solve hit a vanishing denominator.
class DegenerateQuad : public Error {
public:
  using Error::Error;
};

/// A Gamma argument or g_n denominator sits on a pole.
class PoleError : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

/// A Painlevé or dPII step denominator degenerated.
class StepSingular : public Error {
public:
  using Error::Error;
};

/// Separatrix shooting lost every surviving sub-interval.
class BracketLost : public Error {
public:
  using Error::Error;
};

/// Radii evolution produced a non-positive radius.
class SignLoss : public Error {
public:
  SignLoss(const std::string& what, int N, int M) : Error(what), N(N), M(M) {}
  int N;
  int M;
};

class NotAKite : public Error {
public:
  NotAKite(const std::string& what, int n, int m) : Error(what), n(n), m(m) {}
  int n;
  int m;
};

}  // namespace cpat
