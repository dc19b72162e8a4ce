/// Restore the default SIGPIPE disposition so that writing into a closed
/// pipe (`mfq ... | head`) terminates the process quietly instead of
/// panicking inside the standard library's stdout lock.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    std::process::exit(mfq_cli::cli::run(std::env::args_os()));
}
