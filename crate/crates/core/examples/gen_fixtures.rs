//! Regenerates the high-precision oracle files under `tests/fixtures`.
//!
//! ```text
//! cargo run --release --example gen_fixtures
//! ```

use std::path::PathBuf;

use spexpm::baselines::exact::to_decimal;
use spexpm::baselines::fixtures::write_fixture;
use spexpm::baselines::{closed_form_exact, toeplitz_coefficients, SmallMatrix};

const TOEPLITZ_N: usize = 10_000;
const TOEPLITZ_COUNT: usize = 16;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir)?;

    for which in SmallMatrix::ALL {
        let e = closed_form_exact(which);
        let input: Vec<String> = which.input().entries().iter().map(|v| format!("{v:e}")).collect();
        let comments = vec![
            format!("exp(H{}) by closed form, row-major", which.index()),
            format!("input {}", input.join(" ")),
            format!("shape {} {}", e.rows(), e.cols()),
        ];
        let path = dir.join(format!("h{}_expm.txt", which.index()));
        write_fixture(&path, &comments, e.entries())?;
        println!("wrote {}", path.display());
    }

    let g = toeplitz_coefficients(TOEPLITZ_N, TOEPLITZ_COUNT);
    let comments = vec![
        format!("G_0 .. G_{} for exp(tridiag(-1, 2, -1)/(n+1)), n = {TOEPLITZ_N}", TOEPLITZ_COUNT - 1),
        format!("G_0 = {}", to_decimal(&g[0], 40)),
    ];
    let path = dir.join(format!("toeplitz_g_{TOEPLITZ_N}.txt"));
    write_fixture(&path, &comments, &g)?;
    println!("wrote {}", path.display());
    Ok(())
}
