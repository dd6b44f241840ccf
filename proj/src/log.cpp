#include "tphom/log.hpp"

#include <iostream>
#include <mutex>

namespace tphom::log {

namespace {
int g_level = 1;
std::mutex g_mutex;
std::vector<std::string> g_warnings;
}  // namespace

void set_verbosity(int level) { g_level = level; }
int verbosity() { return g_level; }

void warn(const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_warnings.push_back(msg);
    if (g_level >= 1) std::cerr << "warning: " << msg << "\n";
}

void info(const std::string& msg) {
    if (g_level >= 2) {
        std::lock_guard<std::mutex> lock(g_mutex);
        std::cerr << msg << "\n";
    }
}

void debug(const std::string& msg) {
    if (g_level >= 3) {
        std::lock_guard<std::mutex> lock(g_mutex);
        std::cerr << "debug: " << msg << "\n";
    }
}

std::vector<std::string> take_warnings() {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::vector<std::string> out;
    out.swap(g_warnings);
    return out;
}

}  // namespace tphom::log
