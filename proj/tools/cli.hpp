#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace aerofit::cli {

/// Lets an in-process caller observe and stop `serve`.
struct ServeControl {
    std::atomic<httplib::Server*> server{nullptr};
    std::atomic<int> port{0};
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        ServeControl* serve = nullptr);

}  // namespace aerofit::cli
