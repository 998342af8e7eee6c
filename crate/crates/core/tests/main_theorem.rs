use jkscatter::exact::{fmt_rational, int};
use jkscatter::scattering::{init_bipartite, scatter, verify_main_theorem_on};
use jkscatter::Error;

/// Dimension vectors with entries `<= 2`, both sides nonzero and `|d| <= k`.
fn dims(l1: usize, l2: usize, k: u32) -> Vec<Vec<u32>> {
    let n = l1 + l2;
    let mut out = Vec::new();
    let mut d = vec![0u32; n];
    loop {
        let a: u32 = d[..l1].iter().sum();
        let b: u32 = d[l1..].iter().sum();
        if a > 0 && b > 0 && a + b <= k {
            out.push(d.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            d[i] += 1;
            if d[i] <= 2 {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn main_theorem_on_small_bipartite_quivers() {
    let mut checked = 0;
    for (l1, l2, k) in [(1, 1, 5), (2, 1, 5), (1, 2, 5), (3, 1, 5), (2, 2, 4)] {
        let diagram = scatter(&init_bipartite(l1, l2, k).unwrap()).unwrap();
        for dim in dims(l1, l2, k) {
            let a: i64 = dim[..l1].iter().map(|&x| x as i64).sum();
            let b: i64 = dim[l1..].iter().map(|&x| x as i64).sum();
            // compatible and normalized: sources b, sinks -a
            let zeta: Vec<_> = (0..l1 + l2).map(|i| int(if i < l1 { b } else { -a })).collect();
            match verify_main_theorem_on(&diagram, l1, l2, &dim, &zeta) {
                Ok(v) => {
                    println!("K({l1},{l2}) d={dim:?}: c_d={} rhs={}", fmt_rational(&v.lhs), fmt_rational(&v.rhs));
                    assert!(v.pass, "K({l1},{l2}) d={dim:?}: {} vs {}", fmt_rational(&v.lhs), fmt_rational(&v.rhs));
                    checked += 1;
                }
                Err(Error::NonRegularStability(_)) => println!("K({l1},{l2}) d={dim:?}: non-regular"),
                Err(e) => panic!("K({l1},{l2}) d={dim:?}: {e}"),
            }
        }
    }
    assert!(checked >= 20, "only {checked} regular fixtures");
}
