#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permcontract {

enum class ErrorKind {
  NonPrimeP,
  DegreeTooLarge,
  NotIrreducible,
  DivideByZero,
  ForeignElement,
  NoGeneratorOutsideAvoid,
  EvenOrNonPrimeP,
  NotASquare,
  OddCharacteristic,
  EvenCharacteristic,
  NoRoots,
  EqualInputs,
  MismatchedN,
  NotAPermutation,
  DuplicatePerm,
  TooFewPerms,
  ZeroR,
  ZeroC,
  UnsupportedDegree,
  OrderExceedsCap,
  OrderExceedsProbeCap,
  IsolatedVertex,
  BadResidue,
  StructureViolation,
  GeneratorIsUnitRoot,
  IndependenceViolation,
  VerificationFailed,
  ClaimRefuted,
  HashMismatch,
  ParseError,
  Usage,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPrimeP: return "NonPrimeP";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::DivideByZero: return "DivideByZero";
    case ErrorKind::ForeignElement: return "ForeignElement";
    case ErrorKind::NoGeneratorOutsideAvoid: return "NoGeneratorOutsideAvoid";
    case ErrorKind::EvenOrNonPrimeP: return "EvenOrNonPrimeP";
    case ErrorKind::NotASquare: return "NotASquare";
    case ErrorKind::OddCharacteristic: return "OddCharacteristic";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::NoRoots: return "NoRoots";
    case ErrorKind::EqualInputs: return "EqualInputs";
    case ErrorKind::MismatchedN: return "MismatchedN";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::DuplicatePerm: return "DuplicatePerm";
    case ErrorKind::TooFewPerms: return "TooFewPerms";
    case ErrorKind::ZeroR: return "ZeroR";
    case ErrorKind::ZeroC: return "ZeroC";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::OrderExceedsCap: return "OrderExceedsCap";
    case ErrorKind::OrderExceedsProbeCap: return "OrderExceedsProbeCap";
    case ErrorKind::IsolatedVertex: return "IsolatedVertex";
    case ErrorKind::BadResidue: return "BadResidue";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::GeneratorIsUnitRoot: return "GeneratorIsUnitRoot";
    case ErrorKind::IndependenceViolation: return "IndependenceViolation";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::ClaimRefuted: return "ClaimRefuted";
    case ErrorKind::HashMismatch: return "HashMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and tests)
/// can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace permcontract
