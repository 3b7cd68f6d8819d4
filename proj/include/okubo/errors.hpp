#pragma once

#include <stdexcept>
#include <string>

namespace okubo {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
    // True for failures caused by the numerical data rather than by usage.
    virtual bool numerical() const noexcept { return true; }
};

#define OKUBO_ERROR(Name, Numerical)                                        \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
        const char* kind() const noexcept override { return #Name; }        \
        bool numerical() const noexcept override { return Numerical; }     \
    };

OKUBO_ERROR(PoleError, true)
OKUBO_ERROR(BranchError, true)
OKUBO_ERROR(RankError, true)
OKUBO_ERROR(ShapeError, false)
OKUBO_ERROR(ZeroScalar, true)
OKUBO_ERROR(KernelError, true)
OKUBO_ERROR(SingularBlock, true)
OKUBO_ERROR(StructureError, false)
OKUBO_ERROR(GenericityError, true)
OKUBO_ERROR(ResonanceError, true)
OKUBO_ERROR(StepFailure, true)
OKUBO_ERROR(SingularPsi, true)
OKUBO_ERROR(IndexError, false)
OKUBO_ERROR(NonDiagonalizable, true)
OKUBO_ERROR(UnsupportedType, false)
OKUBO_ERROR(FormatError, false)

#undef OKUBO_ERROR

}  // namespace okubo
