#pragma once

#include <stdexcept>
#include <string>

namespace acmdp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad model, bad policy, bad arguments).
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed on otherwise valid input.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A verification routine detected that a claimed property does not hold.
class PropertyViolation : public Error {
public:
    using Error::Error;
};

#define ACMDP_DEFINE_ERROR(Name, Base) \
    class Name : public Base {         \
    public:                            \
        using Base::Base;              \
    }

ACMDP_DEFINE_ERROR(ParseError, InputError);
ACMDP_DEFINE_ERROR(UnknownKey, InputError);
ACMDP_DEFINE_ERROR(RowSumError, InputError);
ACMDP_DEFINE_ERROR(EmptyActionSet, InputError);
ACMDP_DEFINE_ERROR(NonFiniteCost, InputError);
ACMDP_DEFINE_ERROR(DimensionMismatch, InputError);
ACMDP_DEFINE_ERROR(PolicySupportError, InputError);
ACMDP_DEFINE_ERROR(EmptyTargetSet, InputError);
ACMDP_DEFINE_ERROR(WeightError, InputError);
ACMDP_DEFINE_ERROR(HorizonOverflow, InputError);
ACMDP_DEFINE_ERROR(TableTooLarge, InputError);
ACMDP_DEFINE_ERROR(EnumerationTooLarge, InputError);
ACMDP_DEFINE_ERROR(InconsistentMarginals, InputError);
ACMDP_DEFINE_ERROR(BothSignsUnbounded, InputError);
ACMDP_DEFINE_ERROR(InvalidArgument, InputError);

ACMDP_DEFINE_ERROR(SingularSolve, SolverError);
ACMDP_DEFINE_ERROR(CyclingDetected, SolverError);
ACMDP_DEFINE_ERROR(NumericalStall, SolverError);
ACMDP_DEFINE_ERROR(NonConvergence, SolverError);

ACMDP_DEFINE_ERROR(NonConstantOnSupport, PropertyViolation);

#undef ACMDP_DEFINE_ERROR

}  // namespace acmdp
