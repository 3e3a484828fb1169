//! Exactly-3-literal CNF formulas, DIMACS input and a brute-force oracle.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest variable count `sat_oracle` enumerates.
pub const MAX_ORACLE_VARS: usize = 20;

/// Literals are signed 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        let f = CnfFormula { num_vars, clauses };
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        for (i, c) in self.clauses.iter().enumerate() {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > self.num_vars {
                    return Err(invalid(format!("clause {} has bad literal {lit}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// 0-based variable of a literal.
    pub fn var(lit: i32) -> usize {
        lit.unsigned_abs() as usize - 1
    }

    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        for c in &self.clauses {
            for &lit in c {
                occ[Self::var(lit)] += 1;
            }
        }
        occ
    }

    /// Every variable occurs at most four times.
    pub fn is_4_bounded(&self) -> bool {
        self.occurrences().iter().all(|&o| o <= 4)
    }

    pub fn negative_literals(&self) -> usize {
        self.clauses.iter().flatten().filter(|&&l| l < 0).count()
    }

    pub fn literal_true(lit: i32, assignment: &[bool]) -> bool {
        assignment[Self::var(lit)] == (lit > 0)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|&l| Self::literal_true(l, assignment)))
    }

    /// Parses DIMACS CNF; every clause must have exactly three literals.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if header.is_some() || parts.len() != 3 || parts[0] != "cnf" {
                    return Err(invalid(format!("bad DIMACS header `{line}`")));
                }
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| invalid(format!("bad number `{s}`")))
                };
                header = Some((num(parts[1])?, num(parts[2])?));
                continue;
            }
            if header.is_none() {
                return Err(invalid("clause before DIMACS header"));
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| invalid(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    let c: [i32; 3] = current.as_slice().try_into().map_err(|_| {
                        invalid(format!(
                            "clause {} has {} literals, expected 3",
                            clauses.len() + 1,
                            current.len()
                        ))
                    })?;
                    clauses.push(c);
                    current.clear();
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err(invalid("last clause is not terminated by 0"));
        }
        let (q, p) = header.ok_or_else(|| invalid("missing DIMACS header"))?;
        if p != clauses.len() {
            return Err(invalid(format!(
                "header announces {p} clauses, found {}",
                clauses.len()
            )));
        }
        Self::new(q, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// First satisfying assignment in binary counting order, with `x1` as the
/// lowest bit.
pub fn sat_oracle(f: &CnfFormula) -> Result<Option<Vec<bool>>> {
    let q = f.num_vars;
    if q > MAX_ORACLE_VARS {
        return Err(Error::TooLarge(format!(
            "SAT enumeration is limited to {MAX_ORACLE_VARS} variables, got {q}"
        )));
    }
    let decode = |bits: u32| (0..q).map(|j| bits >> j & 1 == 1).collect::<Vec<_>>();
    let total = 1usize << q;
    let chunk = 1usize << 12;
    let chunks = total.div_ceil(chunk);
    Ok(crate::par::find_first_range(chunks, |c| {
        (c * chunk..((c + 1) * chunk).min(total))
            .map(|bits| decode(bits as u32))
            .find(|a| f.satisfied_by(a))
    }))
}
