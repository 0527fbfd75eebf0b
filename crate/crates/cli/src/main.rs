fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    std::process::exit(opnorm_lab::run_cli(std::env::args_os()));
}
