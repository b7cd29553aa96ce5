fn main() {
    // die quietly instead of panicking when the output pipe closes early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(cycloid::cli::run(std::env::args_os()));
}
