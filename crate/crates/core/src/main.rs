fn main() {
    std::process::exit(chainforge::cli::run(std::env::args_os()));
}
