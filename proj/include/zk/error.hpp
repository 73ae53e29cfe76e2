#pragma once

#include <stdexcept>
#include <string>

namespace zk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define ZK_DEFINE_ERROR(NAME)                       \
  struct NAME : Error {                             \
    explicit NAME(const std::string& m = #NAME)     \
        : Error(std::string(#NAME) + ": " + m) {}   \
  }

ZK_DEFINE_ERROR(MixedFields);
ZK_DEFINE_ERROR(DivisionByZero);
ZK_DEFINE_ERROR(NoEmbedding);
ZK_DEFINE_ERROR(BudgetExceeded);
ZK_DEFINE_ERROR(SchemaError);
ZK_DEFINE_ERROR(NotARelation);
ZK_DEFINE_ERROR(NotAMonoid);
ZK_DEFINE_ERROR(NonAssociative);
ZK_DEFINE_ERROR(NotOrthogonal);
ZK_DEFINE_ERROR(SignatureMismatch);
ZK_DEFINE_ERROR(InconsistentGluing);
ZK_DEFINE_ERROR(DegreeTooLow);
ZK_DEFINE_ERROR(NeedLargerM);
ZK_DEFINE_ERROR(NotNormalizable);

#undef ZK_DEFINE_ERROR

// internal invariant failures (algorithm bugs, not user input)
void check(bool cond, const char* what);

}  // namespace zk
