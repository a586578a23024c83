#include "lambda_mixer/errors.hpp"

#include <utility>

namespace lambda_mixer {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  what),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string key, const std::string& what)
    : ConfigError(key + ": " + what), key_(std::move(key)) {}

UnknownKey::UnknownKey(std::string key)
    : ConfigError("unknown key '" + key + "'"), key_(std::move(key)) {}

}  // namespace lambda_mixer
