// Copyright 2026 The qps Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qps {

enum class Errc {
  InvalidArgument,
  NotPrimePower,
  OrderTooLarge,
  DivisionByZero,
  NotASquareOrder,
  SpaceTooLarge,
  SpaceMismatch,
  ZeroVector,
  SamePoint,
  IndexOutOfRange,
  IncompatibleKind,
  NucleusHasNoPerp,
  DegenerateForm,
  NotParabolicEven,
  VertexMeetsBase,
  NotApplicable,
  NotQuasiPolar,
  RemovedNotInSet,
  SetsNotInHyperplane,
  NotSingular,
  NoConeDecomposition,
  BaseWrongType,
  NotEvenQ,
  NoDisjointFlat,
  NotCollinear,
  ConstraintViolated,
  NotQ2Hyperbolic,
  NotQ2,
  SingularHyperplane,
  SectionWrongType,
  NotQ3,
  BadHyperplanes,
  NotOval,
  NotTangent,
  PointOnQuadric,
  PointIsNucleus,
  BadHeader,
  ParseError,
  DuplicatePoint,
  IoError,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotPrimePower: return "NotPrimePower";
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotASquareOrder: return "NotASquareOrder";
    case Errc::SpaceTooLarge: return "SpaceTooLarge";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::SamePoint: return "SamePoint";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::IncompatibleKind: return "IncompatibleKind";
    case Errc::NucleusHasNoPerp: return "NucleusHasNoPerp";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::NotParabolicEven: return "NotParabolicEven";
    case Errc::VertexMeetsBase: return "VertexMeetsBase";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::NotQuasiPolar: return "NotQuasiPolar";
    case Errc::RemovedNotInSet: return "RemovedNotInSet";
    case Errc::SetsNotInHyperplane: return "SetsNotInHyperplane";
    case Errc::NotSingular: return "NotSingular";
    case Errc::NoConeDecomposition: return "NoConeDecomposition";
    case Errc::BaseWrongType: return "BaseWrongType";
    case Errc::NotEvenQ: return "NotEvenQ";
    case Errc::NoDisjointFlat: return "NoDisjointFlat";
    case Errc::NotCollinear: return "NotCollinear";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::NotQ2Hyperbolic: return "NotQ2Hyperbolic";
    case Errc::NotQ2: return "NotQ2";
    case Errc::SingularHyperplane: return "SingularHyperplane";
    case Errc::SectionWrongType: return "SectionWrongType";
    case Errc::NotQ3: return "NotQ3";
    case Errc::BadHyperplanes: return "BadHyperplanes";
    case Errc::NotOval: return "NotOval";
    case Errc::NotTangent: return "NotTangent";
    case Errc::PointOnQuadric: return "PointOnQuadric";
    case Errc::PointIsNucleus: return "PointIsNucleus";
    case Errc::BadHeader: return "BadHeader";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qps
