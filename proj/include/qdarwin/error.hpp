#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdarwin {

enum class ErrorCode {
  NotHermitian,
  NotSquare,
  EmptyMatrix,
  ShapeMismatch,
  NonFinite,
  UnknownFamily,
  BadAmplitudes,
  SizeOverflow,
  IndexOutOfRange,
  DuplicateIndex,
  SameQubit,
  NotUnitary,
  LayoutMismatch,
  ParamOutOfRange,
  BadLambda,
  TooLarge,
  NotSolved,
  BadParams,
  NotAState,
  BadBasis,
  UnknownCase,
  ConfigInvalid,
  ParseError,
  RangeError,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::BadAmplitudes: return "BadAmplitudes";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::SameQubit: return "SameQubit";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::BadLambda: return "BadLambda";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotSolved: return "NotSolved";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::BadBasis: return "BadBasis";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeError: return "RangeError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdarwin
