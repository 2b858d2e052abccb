/// @file  error.hpp
/// @brief Exception type shared by every lloc module.

#pragma once

#include <stdexcept>
#include <string>

namespace lloc {

/// Failure categories. Outcomes that are part of an algorithm's normal
/// answer (an inconsistent comparator, an infeasible LP, no perfect
/// embedding) are returned as values instead.
enum class ErrorCode {
	TieEncountered,
	NonFiniteInput,
	LengthMismatch,
	IndexOutOfRange,
	MalformedHeader,
	MalformedRecord,
	BadLength,
	BadHexDigit,
	InvalidPartition,
	InvalidArgument,
	TooLarge,
	Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
	Error(ErrorCode code, const std::string& what)
		: std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

	ErrorCode code() const noexcept { return code_; }

private:
	ErrorCode code_;
};

} // namespace lloc
