fn main() {
    std::process::exit(spherical_cubature::cli::run(std::env::args_os()));
}
