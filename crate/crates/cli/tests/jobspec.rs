//! Round trips of the job text format.

use bgg_cli::JobSpec;
use proptest::prelude::*;

fn nodes(rank: usize) -> impl Strategy<Value = String> {
    prop::collection::btree_set(1..=rank, 0..=rank).prop_map(|s| {
        if s.is_empty() {
            "-".to_string()
        } else {
            s.iter().rev().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        }
    })
}

fn job_line() -> impl Strategy<Value = String> {
    (1usize..5).prop_flat_map(|rank| {
        (
            nodes(rank),
            nodes(rank),
            prop::collection::vec((-9i64..9, 1i64..5), rank),
            prop::option::of(0u64..4),
            prop::option::of(0u64..1000),
            any::<bool>(),
        )
            .prop_map(move |(p, q, hw, degree, seed, shuffle)| {
                let hw: Vec<String> = hw.iter().map(|(n, d)| format!("{n}/{d}")).collect();
                let mut toks = vec![format!("algebra=A{rank}"), format!("p={p}"), format!("q={q}"), format!("hw={}", hw.join(","))];
                if let Some(d) = degree {
                    toks.push(format!("degree={d}"));
                }
                if let Some(s) = seed {
                    toks.push(format!("seed={s}"));
                }
                if shuffle {
                    toks.reverse();
                }
                format!("splitting {}", toks.join(" "))
            })
    })
}

proptest! {
    #[test]
    fn render_is_a_normal_form(line in job_line()) {
        // p ⊄ q is caught when the pair is built, not by the parser
        let job = JobSpec::parse(&line).unwrap();
        let rendered = job.to_string();
        let again = JobSpec::parse(&rendered).unwrap();
        prop_assert_eq!(&again, &job);
        prop_assert_eq!(again.to_string(), rendered);
    }
}
