#pragma once

#include <stdexcept>
#include <string>

namespace funstack {

// Source position, 1-based; line == 0 means "no position".
struct Span {
  int line = 0;
  int col = 0;
};

inline std::string span_str(Span s) {
  if (s.line == 0) return "";
  return std::to_string(s.line) + ":" + std::to_string(s.col);
}

// Exit-code categories: user errors (bad program, zero evidence) map to 1,
// capability errors (continuous program on an exact backend, unsupported
// observation, blown budgets) map to 2, internal errors to 70.
enum class ErrorClass { User, Capability, Internal };

struct FunError : std::runtime_error {
  ErrorClass cls;
  std::string kind;
  Span span;
  FunError(ErrorClass c, std::string k, const std::string& msg, Span sp = {})
      : std::runtime_error(k + (sp.line ? " at " + span_str(sp) : "") + ": " + msg),
        cls(c), kind(std::move(k)), span(sp) {}
};

#define FUNSTACK_ERROR(Name, Class)                                        \
  struct Name : FunError {                                                 \
    explicit Name(const std::string& msg, Span sp = {})                    \
        : FunError(ErrorClass::Class, #Name, msg, sp) {}                   \
  }

FUNSTACK_ERROR(LexError, User);
FUNSTACK_ERROR(ParseError, User);
FUNSTACK_ERROR(DesugarError, User);
FUNSTACK_ERROR(TypeError, User);
FUNSTACK_ERROR(UnrollError, User);
FUNSTACK_ERROR(ZeroEvidence, User);
FUNSTACK_ERROR(ImpTypeError, User);
FUNSTACK_ERROR(ParamError, User);

FUNSTACK_ERROR(ContinuousObserveError, Capability);
FUNSTACK_ERROR(ContinuousGraphError, Capability);
FUNSTACK_ERROR(UnsupportedObserveError, Capability);
FUNSTACK_ERROR(UnsupportedDistError, Capability);
FUNSTACK_ERROR(SupportOverflow, Capability);
FUNSTACK_ERROR(BudgetError, Capability);
FUNSTACK_ERROR(NestedIterationError, Capability);
FUNSTACK_ERROR(GridError, Capability);

FUNSTACK_ERROR(StuckError, Internal);
FUNSTACK_ERROR(FreshnessError, Internal);
FUNSTACK_ERROR(ShapeError, Internal);
FUNSTACK_ERROR(KernelMassError, Internal);
FUNSTACK_ERROR(InternalError, Internal);

#undef FUNSTACK_ERROR

inline int exit_code_for(const FunError& e) {
  switch (e.cls) {
    case ErrorClass::User: return 1;
    case ErrorClass::Capability: return 2;
    default: return 70;
  }
}

}  // namespace funstack
