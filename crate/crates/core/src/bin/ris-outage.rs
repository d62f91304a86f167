use std::process::ExitCode;

fn main() -> ExitCode {
    ris_outage::cli::main()
}
