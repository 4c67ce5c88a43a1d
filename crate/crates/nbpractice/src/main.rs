//! `nbpractice` binary: everything lives in the library, this is argv in,
//! exit code out.

fn main() {
    std::process::exit(nbpractice::cli::run(std::env::args_os()));
}
