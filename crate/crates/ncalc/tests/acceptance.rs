//! End-to-end acceptance run: fifteen headline criteria, each printed as a
//! single pass/fail line with its wall-clock time. The first failures are
//! collected and reported together at the end so one broken area does not
//! mask the others.

use std::time::{Duration, Instant};

use std::rc::Rc;

use ncalc::based::BasedAlgebra;
use ncalc::forms::DrContext;
use ncalc::structure::idempotent_line;
use ncalc::suite::{run_suite, SuiteCaps};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn criterion<F>(&mut self, label: &str, budget: Option<Duration>, body: F)
    where
        F: FnOnce() -> Result<(), String>,
    {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let mut verdict = result;
        if verdict.is_ok() {
            if let Some(limit) = budget {
                if elapsed > limit {
                    verdict = Err(format!(
                        "took {} ms, budget is {} ms",
                        elapsed.as_millis(),
                        limit.as_millis()
                    ));
                }
            }
        }
        match &verdict {
            Ok(()) => println!("PASS {} ({} ms)", label, elapsed.as_millis()),
            Err(why) => {
                println!("FAIL {} ({} ms): {}", label, elapsed.as_millis(), why);
                self.failures.push(format!("{}: {}", label, why));
            }
        }
    }

    fn suite(&mut self, label: &str, suite: &str, budget: Option<Duration>) {
        let caps = SuiteCaps::default();
        self.criterion(label, budget, || match run_suite(suite, 42, &caps) {
            Ok(report) => {
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| {
                        let cex = c.counterexample.clone().unwrap_or_default();
                        format!("{} [{}]", c.name, cex)
                    })
                    .collect();
                if failed.is_empty() {
                    Ok(())
                } else {
                    Err(failed.join("; "))
                }
            }
            Err(e) => Err(format!("suite error: {}", e)),
        });
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    gate.criterion(
        "01 de Rham cohomology of k[e]/(e^2 - e) is (1,0,1,0,1)",
        Some(Duration::from_secs(5)),
        || {
            let alg = Rc::new(BasedAlgebra::fin_dim(idempotent_line()));
            let ctx = DrContext::new(alg);
            let dims = ctx.dr_cohomology_reduced(4, 0).map_err(|e| e.to_string())?;
            let betti: Vec<usize> = (0..=4).map(|n| dims[&(n, 0)]).collect();
            if betti == vec![1, 0, 1, 0, 1] {
                Ok(())
            } else {
                Err(format!("got dims {:?}", betti))
            }
        },
    );

    gate.suite(
        "02 Karoubi operator identities on free 2-generator forms",
        "karoubi",
        Some(Duration::from_secs(30)),
    );
    gate.suite("03 Cartan calculus identities", "cartan", None);
    gate.suite(
        "04 necklace bracket Lie axioms and Hamiltonian homomorphism",
        "necklace-jacobi",
        None,
    );
    gate.suite("05 weightwise exactness of the Quillen sequence", "quillen", None);
    gate.suite("06 Poincare primitives for exact classes", "poincare", None);
    gate.suite(
        "07 Hochschild homology fixtures, Morita invariance",
        "hochschild",
        Some(Duration::from_secs(60)),
    );
    gate.suite(
        "08 Gerstenhaber structure and chain-level actions",
        "gerstenhaber",
        None,
    );
    gate.suite("09 Hochschild-Kostant-Rosenberg dimension counts", "hkr", None);
    gate.suite("10 Moyal star product and Weyl symmetrization", "moyal", None);
    gate.suite("11 representation functor and trace calculus", "rep", None);
    gate.suite("12 Gelfand-Smirnov Chern classes and transgression", "chern", None);
    gate.suite("13 K-theory Chern character certificates", "ktheory", None);
    gate.suite("14 formal smoothness verdicts with witnesses", "smoothness", None);
    gate.suite("15 Weil algebra of sl2: Cartan identities and acyclicity", "weil", None);

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
