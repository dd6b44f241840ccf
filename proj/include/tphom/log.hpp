#pragma once

#include <string>
#include <vector>

namespace tphom::log {

// 0 silent, 1 warnings, 2 info, 3 debug.
void set_verbosity(int level);
int verbosity();

void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

// Warnings recorded since the last call, in order.
std::vector<std::string> take_warnings();

}  // namespace tphom::log
