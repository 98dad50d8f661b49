#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stylo {

// Error categories surfaced by the toolkit. The CLI maps these onto exit
// codes: non_convergence -> 3, everything else -> 2.
enum class errc {
  missing_file,
  malformed_manifest,
  malformed_spec,
  duplicate_id,
  empty_document,
  invalid_utf8,
  malformed_table,
  empty_input,
  bad_argument,
  space_mismatch,
  zero_norm,
  zero_total,
  single_class,
  unknown_document,
  non_convergence,
  io_failure,
};

constexpr std::string_view errc_name(errc c) {
  switch (c) {
    case errc::missing_file: return "missing_file";
    case errc::malformed_manifest: return "malformed_manifest";
    case errc::malformed_spec: return "malformed_spec";
    case errc::duplicate_id: return "duplicate_id";
    case errc::empty_document: return "empty_document";
    case errc::invalid_utf8: return "invalid_utf8";
    case errc::malformed_table: return "malformed_table";
    case errc::empty_input: return "empty_input";
    case errc::bad_argument: return "bad_argument";
    case errc::space_mismatch: return "space_mismatch";
    case errc::zero_norm: return "zero_norm";
    case errc::zero_total: return "zero_total";
    case errc::single_class: return "single_class";
    case errc::unknown_document: return "unknown_document";
    case errc::non_convergence: return "non_convergence";
    case errc::io_failure: return "io_failure";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace stylo
