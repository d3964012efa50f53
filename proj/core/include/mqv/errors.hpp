#pragma once

#include <stdexcept>
#include <string>

namespace mqv {

// Every checked failure mode has its own type so callers (and the CLI
// report writer) can name it without string matching.
struct Error : std::runtime_error {
    explicit Error(std::string name, const std::string& what)
        : std::runtime_error(what), error_name(std::move(name)) {}
    std::string error_name;
};

#define MQV_DEFINE_ERROR(NAME)                                   \
    struct NAME : Error {                                        \
        explicit NAME(const std::string& what)                   \
            : Error(#NAME, what) {}                              \
    }

MQV_DEFINE_ERROR(FieldMismatch);
MQV_DEFINE_ERROR(BadPrime);
MQV_DEFINE_ERROR(NLevelTooSmall);
MQV_DEFINE_ERROR(BadPairing);
MQV_DEFINE_ERROR(IndexMismatch);
MQV_DEFINE_ERROR(NonComposable);
MQV_DEFINE_ERROR(ZeroParameter);
MQV_DEFINE_ERROR(DegreeOverflow);
MQV_DEFINE_ERROR(VertexMismatch);
MQV_DEFINE_ERROR(ObstructionError);
MQV_DEFINE_ERROR(SingularG);
MQV_DEFINE_ERROR(UnsupportedShape);
MQV_DEFINE_ERROR(RetryExhausted);
MQV_DEFINE_ERROR(ConsistencyError);
MQV_DEFINE_ERROR(SingularGroupElem);
MQV_DEFINE_ERROR(TooLarge);
MQV_DEFINE_ERROR(ShapeMismatch);
MQV_DEFINE_ERROR(NotAComplex);
MQV_DEFINE_ERROR(SingularD);
MQV_DEFINE_ERROR(SingularOperator);
MQV_DEFINE_ERROR(ParseError);

#undef MQV_DEFINE_ERROR

} // namespace mqv
