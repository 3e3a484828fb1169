//! PACE-2017 `.td` files and the native JSON form.

use serde::{Deserialize, Serialize};

use super::TreeDecomposition;
use crate::error::{invalid, Result};
use crate::model::VertexSet;

pub const TD_SCHEMA: &str = "tree-decomposition/1";

/// Parses a PACE `.td` file. PACE vertex `i` (1-based) is `names[i - 1]`
/// when a name list is given, otherwise the `i`-th declared vertex.
pub fn parse_pace(
    text: &str,
    vertices: &VertexSet,
    names: Option<&[String]>,
) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let resolve = |num: usize| -> Result<usize> {
        if num == 0 {
            return Err(invalid("PACE vertex numbers start at 1"));
        }
        match names {
            Some(list) => {
                let name = list
                    .get(num - 1)
                    .ok_or_else(|| invalid(format!("no name for PACE vertex {num}")))?;
                vertices.require(name)
            }
            None if num <= vertices.len() => Ok(num - 1),
            None => Err(invalid(format!("PACE vertex {num} out of range"))),
        }
    };
    let num = |tok: &str| -> Result<usize> {
        tok.parse()
            .map_err(|_| invalid(format!("bad number `{tok}` in .td file")))
    };
    for (lineno, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if toks.len() != 5 || toks[1] != "td" || header.is_some() {
                    return Err(invalid(format!("line {}: bad header", lineno + 1)));
                }
                let nbags = num(toks[2])?;
                header = Some((nbags, num(toks[4])?));
                bags = vec![None; nbags];
            }
            Some("b") => {
                let (nbags, _) = header.ok_or_else(|| invalid("bag line before header"))?;
                let id = num(toks.get(1).copied().unwrap_or(""))?;
                if id == 0 || id > nbags || bags[id - 1].is_some() {
                    return Err(invalid(format!("line {}: bad bag id {id}", lineno + 1)));
                }
                let members = toks[2..]
                    .iter()
                    .map(|t| resolve(num(t)?))
                    .collect::<Result<Vec<_>>>()?;
                bags[id - 1] = Some(members);
            }
            Some(_) => {
                let (nbags, _) = header.ok_or_else(|| invalid("edge line before header"))?;
                if toks.len() != 2 {
                    return Err(invalid(format!("line {}: bad edge line", lineno + 1)));
                }
                let (a, b) = (num(toks[0])?, num(toks[1])?);
                if a == 0 || b == 0 || a > nbags || b > nbags {
                    return Err(invalid(format!("line {}: bad bag reference", lineno + 1)));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    if header.is_none() {
        return Err(invalid("missing `s td` header"));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| invalid(format!("bag {} never defined", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, edges))
}

/// PACE text with vertex `i` written as `i + 1`.
pub fn write_pace(td: &TreeDecomposition, num_vertices: usize) -> String {
    let mut out = format!(
        "s td {} {} {}\n",
        td.bags.len(),
        td.width() + 1,
        num_vertices
    );
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TdFile {
    bags: Vec<Vec<String>>,
    edges: Vec<[usize; 2]>,
}

/// `{"bags": [[name, ...], ...], "edges": [[i, j], ...]}` with 0-based bag ids.
pub fn read_td_json(text: &str, vertices: &VertexSet) -> Result<TreeDecomposition> {
    let f: TdFile = serde_json::from_str(text)?;
    let bags = f
        .bags
        .iter()
        .map(|b| b.iter().map(|v| vertices.require(v)).collect())
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(
        bags,
        f.edges.iter().map(|&[a, b]| (a, b)).collect(),
    ))
}

pub fn write_td_json(td: &TreeDecomposition, vertices: &VertexSet) -> String {
    let f = TdFile {
        bags: td
            .bags
            .iter()
            .map(|b| b.iter().map(|&v| vertices.id(v).to_string()).collect())
            .collect(),
        edges: td.edges.iter().map(|&(a, b)| [a, b]).collect(),
    };
    serde_json::to_string(&f).expect("td serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pace_roundtrip_and_sidecar() {
        let vs = VertexSet::new(["u", "v", "w"]).unwrap();
        let text = "c example\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = parse_pace(text, &vs, None).unwrap();
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(parse_pace(&write_pace(&td, 3), &vs, None).unwrap(), td);
        let names: Vec<String> = ["w", "v", "u"].iter().map(|s| s.to_string()).collect();
        let td2 = parse_pace(text, &vs, Some(&names)).unwrap();
        assert_eq!(td2.bags, vec![vec![1, 2], vec![0, 1]]);
        assert!(parse_pace("b 1 1\n", &vs, None).is_err());
        assert!(parse_pace("s td 1 1 3\nb 1 9\n", &vs, None).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let vs = VertexSet::new(["u", "v", "w"]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(read_td_json(&write_td_json(&td, &vs), &vs).unwrap(), td);
    }
}
