//! One-line text encoding of graphs.
//!
//! `FLAVOR;d=D;V=N;C=colors;E=s>t,s>t,...;s=+|-`, e.g.
//! `OGC;d=2;V=2;C=bb;E=0>1;s=+`. Edges appear in orientation order.

use super::{Color, Flavor, Graph, GraphError, Sign};

pub fn encode(g: &Graph) -> String {
    let colors: String = g.colors().iter().map(|c| c.as_char()).collect();
    let edges: Vec<String> = g.edges().iter().map(|(s, t)| format!("{s}>{t}")).collect();
    format!(
        "{};d={};V={};C={};E={};s={}",
        g.flavor(),
        g.d(),
        g.num_vertices(),
        colors,
        edges.join(","),
        if g.sign().is_negative() { '-' } else { '+' }
    )
}

fn err(pos: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        pos,
        msg: msg.into(),
    }
}

/// Parses one encoded line and checks the flavor invariants.
pub fn decode(line: &str) -> Result<Graph, GraphError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let mut fields = Vec::new();
    let mut start = 0;
    for part in line.split(';') {
        fields.push((start, part));
        start += part.len() + 1;
    }
    if fields.len() != 6 {
        return Err(err(0, format!("expected 6 fields, found {}", fields.len())));
    }
    let flavor = match fields[0].1 {
        "GC" => Flavor::Gc,
        "OGC" => Flavor::Ogc,
        "HAT" => Flavor::Hat,
        other => return Err(err(0, format!("unknown flavor {other:?}"))),
    };
    let value = |i: usize, key: &str| -> Result<(usize, &str), GraphError> {
        let (pos, f) = fields[i];
        f.strip_prefix(key)
            .map(|v| (pos + key.len(), v))
            .ok_or_else(|| err(pos, format!("expected {key:?}")))
    };
    let (pos, dv) = value(1, "d=")?;
    let d: i32 = dv.parse().map_err(|_| err(pos, "bad integer for d"))?;
    let (pos, nv) = value(2, "V=")?;
    let n: usize = nv.parse().map_err(|_| err(pos, "bad vertex count"))?;
    let (pos, cv) = value(3, "C=")?;
    if cv.len() != n {
        return Err(err(pos, format!("{} colors for {} vertices", cv.len(), n)));
    }
    let mut colors = Vec::with_capacity(n);
    for (i, ch) in cv.chars().enumerate() {
        colors.push(match ch {
            'b' => Color::Black,
            'w' => Color::White,
            _ => return Err(err(pos + i, format!("bad color {ch:?}"))),
        });
    }
    let (mut pos, ev) = value(4, "E=")?;
    let mut edges = Vec::new();
    if !ev.is_empty() {
        for pair in ev.split(',') {
            let (s, t) = pair
                .split_once('>')
                .ok_or_else(|| err(pos, format!("bad edge {pair:?}")))?;
            let s: usize = s.parse().map_err(|_| err(pos, "bad edge source"))?;
            let t: usize = t.parse().map_err(|_| err(pos, "bad edge target"))?;
            edges.push((s, t));
            pos += pair.len() + 1;
        }
    }
    let (pos, sv) = value(5, "s=")?;
    let sign = match sv {
        "+" => Sign::PLUS,
        "-" => Sign::MINUS,
        _ => return Err(err(pos, "sign must be + or -")),
    };
    Ok(Graph::new(flavor, d, colors, edges)?.with_sign(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixtures() {
        let v = Graph::black(Flavor::Gc, 2, 1, &[]).unwrap();
        assert_eq!(encode(&v), "GC;d=2;V=1;C=b;E=;s=+");
        assert_eq!(decode("GC;d=2;V=1;C=b;E=;s=+").unwrap(), v);
        let e = Graph::black(Flavor::Ogc, 2, 2, &[(0, 1)]).unwrap();
        assert_eq!(encode(&e), "OGC;d=2;V=2;C=bb;E=0>1;s=+");
        assert_eq!(decode("OGC;d=2;V=2;C=bb;E=0>1;s=+").unwrap(), e);
    }

    #[test]
    fn rejects_cycles_and_garbage() {
        assert!(matches!(
            decode("OGC;d=3;V=3;C=bbb;E=0>1,1>2,2>0;s=+"),
            Err(GraphError::DirectedCycle(_))
        ));
        match decode("GC;d=2;V=2;C=bx;E=;s=+") {
            Err(GraphError::Parse { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("{other:?}"),
        }
        assert!(decode("GC;d=2;V=2").is_err());
        assert!(decode("GC;d=2;V=2;C=bb;E=0-1;s=+").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..7, raw in proptest::collection::vec((0usize..7, 0usize..7), 0..9), d in -3i32..5, neg: bool) {
            let edges: Vec<(usize, usize)> = raw.into_iter().map(|(s, t)| (s % n, t % n)).collect();
            let g = Graph::black(Flavor::Gc, d, n, &edges).unwrap();
            let g = if neg { g.negated() } else { g };
            prop_assert_eq!(decode(&encode(&g)).unwrap(), g);
        }
    }
}
