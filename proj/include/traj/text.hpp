#ifndef TRAJ_TEXT_HPP
#define TRAJ_TEXT_HPP

#include <string>
#include <vector>

namespace traj {

/// Shortest decimal string that round-trips the double (to_chars).
std::string format_double(double v);

/// Splits on a single delimiter; keeps empty fields.
std::vector<std::string> split(const std::string& s, char delim);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

std::string trim(const std::string& s);

std::string to_lower(std::string s);

/// SQL-LIKE match where '%' matches any (possibly empty) substring.
bool like_match(const std::string& text, const std::string& pattern);

} // namespace traj

#endif // TRAJ_TEXT_HPP
