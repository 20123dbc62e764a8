fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SRBM_LOG", "warn")).init();
    std::process::exit(srbm::cli::run(std::env::args_os()));
}
