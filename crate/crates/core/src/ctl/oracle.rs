use std::collections::BTreeMap;

use super::check::{label, Indexed, Kripke};
use super::Ctl;
use crate::error::{Error, Result};

/// Default cap on the number of structures examined by the oracle.
pub const ORACLE_BUDGET: u64 = 1 << 24;

/// Smallest model of `p` with at most `n_max` states, if any.
pub fn sat_oracle(p: &Ctl, n_max: usize) -> Result<Option<(Kripke, String)>> {
    for n in 1..=n_max {
        if let Some(w) = sat_oracle_exact(p, n, ORACLE_BUDGET)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn permute_mask(mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0;
    for (i, &j) in perm.iter().enumerate() {
        if mask & (1 << i) != 0 {
            out |= 1 << j;
        }
    }
    out
}

/// Model of `p` with exactly `n` states. Labelings are enumerated in sorted
/// order and edge sets only in their least form under label-preserving
/// state permutations.
pub fn sat_oracle_exact(p: &Ctl, n: usize, budget: u64) -> Result<Option<(Kripke, String)>> {
    if n == 0 || n > 6 {
        return Err(Error::Invalid(format!("state count {n} outside 1..=6")));
    }
    let props: Vec<String> = p.props().iter().map(|s| s.to_string()).collect();
    let m = props.len();
    if m > 8 {
        return Err(Error::Invalid("too many propositions for the oracle".into()));
    }
    let perms = permutations(n);
    let mut examined = 0u64;
    let mut labels = vec![0u32; n];
    loop {
        let label_sets: Vec<Vec<String>> = labels
            .iter()
            .map(|&mask| (0..m).filter(|b| mask & (1 << b) != 0).map(|b| props[b].clone()).collect())
            .collect();
        let stabilizer: Vec<&Vec<usize>> =
            perms.iter().filter(|pi| (0..n).all(|i| labels[pi[i]] == labels[i])).collect();
        let mut succ = vec![1u32; n];
        loop {
            let canonical = stabilizer.iter().all(|pi| {
                let mut image = vec![0u32; n];
                for i in 0..n {
                    image[pi[i]] = permute_mask(succ[i], pi);
                }
                image >= succ
            });
            if canonical {
                examined += 1;
                if examined > budget {
                    return Err(Error::Budget(format!("more than {budget} structures")));
                }
                let idx = Indexed {
                    succ: succ.iter().map(|&mask| (0..n).filter(|j| mask & (1 << j) != 0).collect()).collect(),
                    labels: label_sets.clone(),
                };
                if let Some(s) = label(&idx, p).iter().position(|&b| b) {
                    return Ok(Some((to_kripke(&idx), format!("s{s}"))));
                }
            }
            if !advance(&mut succ, 1 << n) {
                break;
            }
        }
        // Next non-decreasing labeling.
        let top = 1u32 << m;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if labels[i] + 1 < top {
                labels[i] += 1;
                for j in i + 1..n {
                    labels[j] = labels[i];
                }
                break;
            }
        }
    }
}

/// Odometer step over successor masks in `1..top`; false once it wraps.
fn advance(succ: &mut [u32], top: u32) -> bool {
    for i in (0..succ.len()).rev() {
        succ[i] += 1;
        if succ[i] < top {
            return true;
        }
        succ[i] = 1;
    }
    false
}

fn to_kripke(idx: &Indexed) -> Kripke {
    let name = |i: usize| format!("s{i}");
    let states = (0..idx.succ.len()).map(name).collect();
    let edges = idx.succ.iter().enumerate().flat_map(|(i, ts)| ts.iter().map(move |&j| (name(i), name(j)))).collect();
    let labels: BTreeMap<String, Vec<String>> = idx
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (name(i), l.clone()))
        .collect();
    Kripke { states, edges, labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctl::model_check;
    use crate::parser::parse_ctl;

    #[test]
    fn trivial_cases() {
        let (k, s) = sat_oracle(&parse_ctl("t -> AF c").unwrap(), 1).unwrap().unwrap();
        assert_eq!(k.states.len(), 1);
        assert!(model_check(&k, &s, &parse_ctl("t -> AF c").unwrap()).unwrap());
        assert!(sat_oracle(&parse_ctl("p & ~p").unwrap(), 3).unwrap().is_none());
        assert!(sat_oracle(&parse_ctl("AF c & EG ~c").unwrap(), 3).unwrap().is_none());
    }

    #[test]
    fn needs_two_states() {
        let f = parse_ctl("p & EX ~p").unwrap();
        assert!(sat_oracle_exact(&f, 1, ORACLE_BUDGET).unwrap().is_none());
        assert!(sat_oracle_exact(&f, 2, ORACLE_BUDGET).unwrap().is_some());
    }

    #[test]
    fn symmetry_reduction_counts() {
        // Two unlabeled states: edge sets up to swapping the states.
        let mut count = 0;
        let perms = permutations(2);
        for a in 1u32..4 {
            for b in 1u32..4 {
                let succ = vec![a, b];
                let canonical = perms.iter().all(|pi| {
                    let mut image = vec![0u32; 2];
                    for i in 0..2 {
                        image[pi[i]] = permute_mask(succ[i], pi);
                    }
                    image >= succ
                });
                if canonical {
                    count += 1;
                }
            }
        }
        // 9 edge sets, 3 fixed by the swap, so (9 + 3) / 2 orbits.
        assert_eq!(count, 6);
    }
}
