#ifndef CSRP_TOOLS_CLI_HPP
#define CSRP_TOOLS_CLI_HPP
#include <string>
#include <vector>
namespace csrp {
int cli_main(int argc, char** argv);
int cli_run(const std::vector<std::string>& args);
}
#endif
