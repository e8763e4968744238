#pragma once

namespace fxhedge {

/// Command-line entry point (calibrate / allocate / sensitivity /
/// simulate / backtest). Returns the process exit status: 0 on success,
/// 1 on data errors, 2 on usage errors. Output files are only written
/// once a run has fully computed, so failures never leave partial files.
int cli_main(int argc, const char* const* argv);

} // namespace fxhedge
