//! Influence graph from coauthorship records, then its most influential authors.
use lt_influence::ingest::ingest_coauthorship;
use lt_influence::io::parse_coauthorship;
use lt_influence::rank::build_g1;
use lt_influence::Evaluator;

const RECORDS: &str = "\
p1\tada,bert,cleo
p2\tada,bert
p3\tbert,dana
p4\tcleo,dana,eli
p5\tada
p6\teli,ada
";

fn main() -> lt_influence::Result<()> {
    let (g, warnings) = ingest_coauthorship(&parse_coauthorship(RECORDS)?)?;
    for w in &warnings {
        println!("warning: {w}");
    }
    for (i, j, w) in g.edges() {
        println!("{} -> {}: {w:.4}", g.label(i), g.label(j));
    }
    let g1 = build_g1(&g, Evaluator::exact())?;
    for &(v, s) in &g1.entries {
        println!("{}: sigma {s:.4}", g.label(v));
    }
    Ok(())
}
