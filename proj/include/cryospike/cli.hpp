#pragma once

namespace cryospike {

/// Command-line entry point shared by the installed binary and the tests.
/// Returns 0 on success, 2 for usage and configuration errors, 3 for
/// simulation-domain failures and 1 for anything unexpected.
int cli_main(int argc, const char* const* argv);

} // namespace cryospike
