#include "qnnent/errors.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qnnent::limits {

namespace {
int env_max_sites() {
    if(const char *env = std::getenv("QNNENT_MAX_SITES")) {
        char *end = nullptr;
        long  v   = std::strtol(env, &end, 10);
        if(end != env && *end == '\0' && v > 0 && v <= 40) return static_cast<int>(v);
    }
    return 22;
}
std::atomic<int> &cap() {
    static std::atomic<int> value{env_max_sites()};
    return value;
}
} // namespace

int  max_sites() { return cap().load(); }
void set_max_sites(int n) { cap().store(n); }

double dense_bytes(int n_sites) { return std::ldexp(16.0, n_sites); }

void require_dense(int n_sites, const std::string &what) {
    if(n_sites <= max_sites()) return;
    std::ostringstream os;
    double             gib = dense_bytes(n_sites) / (1024.0 * 1024.0 * 1024.0);
    os << what << ": " << n_sites << " sites exceeds the dense limit of " << max_sites()
       << " (a dense state would need " << gib << " GiB; set QNNENT_MAX_SITES to override)";
    throw ResourceError(os.str());
}

} // namespace qnnent::limits
