//! Hochschild (co)homology of small algebras: dimension tables, the
//! HH^0 = center and HH^1 = Der/Inn interpretations, the Morita trace,
//! and the formal smoothness test.

use ncalc::hochschild::{
    derivation_space, formal_smoothness_check, hh_cohomology, hh_homology, morita_trace_check,
    Bimodule, SmoothnessVerdict,
};
use ncalc::structure::{
    matrix_units, split_semisimple, truncated_polynomials, upper_triangular_2,
};

fn main() {
    // dual numbers k[x]/(x^2): infinite homological dimension
    let a = truncated_polynomials(2);
    let m = Bimodule::regular(&a);
    let h = hh_homology(&a, &m, 4, true).unwrap();
    println!("HH_(k[x]/(x^2)) dims 0..4: {:?}", h.dims);
    let hc = hh_cohomology(&a, &m, 2).unwrap();
    println!("HH^(k[x]/(x^2)) dims 0..2: {:?}", hc.dims);
    println!("center has dim {}", a.center_basis().len());

    // semisimple algebras are invisible to Hochschild theory
    for (name, a) in [("Mat_2(k)", matrix_units(2)), ("k x k", split_semisimple(2))] {
        let m = Bimodule::regular(&a);
        let h = hh_homology(&a, &m, 3, true).unwrap();
        println!("HH_({}) dims 0..3: {:?}", name, h.dims);
    }

    // HH^1 = derivations modulo inner derivations
    for (name, a) in [
        ("Mat_2(k)", matrix_units(2)),
        ("k[x]/(x^2)", truncated_polynomials(2)),
        ("upper triangular", upper_triangular_2()),
    ] {
        let rep = derivation_space(&a);
        println!(
            "{}: dim Der = {}, dim Inn = {}, dim HH^1 = {}",
            name,
            rep.dim_der,
            rep.dim_inn,
            rep.dim_der - rep.dim_inn
        );
    }

    // Morita invariance via the trace map on HH_0
    let rep = morita_trace_check(&truncated_polynomials(2), 2).unwrap();
    println!(
        "trace: HH_0(Mat_2(k[x]/(x^2))) -> HH_0(k[x]/(x^2)) iso: {}",
        rep.iso
    );

    // formal smoothness: projectivity of Omega^1_nc
    for (name, a) in [
        ("k x k", split_semisimple(2)),
        ("Mat_2(k)", matrix_units(2)),
        ("upper triangular", upper_triangular_2()),
        ("k[x]/(x^2)", truncated_polynomials(2)),
    ] {
        match formal_smoothness_check(&a).unwrap() {
            SmoothnessVerdict::Smooth { .. } => println!("{}: formally smooth", name),
            SmoothnessVerdict::NotSmooth { hh2_obstruction } => println!(
                "{}: not smooth (dim HH^2(A, K) = {})",
                name, hh2_obstruction
            ),
        }
    }
}
