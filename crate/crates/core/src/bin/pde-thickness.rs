fn main() {
    std::process::exit(pde_thickness::cli::run(std::env::args_os()));
}
