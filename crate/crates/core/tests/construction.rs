use hoforms::{check_parabolic_lemma, verify_level, Constructor, GroupProfile};

fn grid() -> Vec<(u32, u32, usize)> {
    let mut out = Vec::new();
    for g in [1, 2] {
        for k in [2, 4] {
            for t in 1..=4 {
                out.push((g, k, t));
            }
        }
    }
    out
}

#[test]
fn every_level_verifies() {
    for (g, k, t) in grid() {
        let ctor = Constructor::new(GroupProfile::synthetic(g, 2, &[2, 4]).unwrap());
        let rep = verify_level(&ctor, t, k).unwrap();
        let bad: Vec<_> = rep.failures().take(5).collect();
        assert!(
            rep.pass,
            "g={g} k={k} t={t}: rank {}/{} failures {bad:?}",
            rep.rank, rep.expected_rank
        );
    }
}

#[test]
fn parabolic_lemma_holds() {
    for k in [2, 4] {
        for t in [3, 4] {
            let ctor = Constructor::new(GroupProfile::synthetic(1, 2, &[2, 4]).unwrap());
            let rep = check_parabolic_lemma(&ctor, t, k).unwrap();
            let bad: Vec<_> = rep.entries.iter().filter(|e| !e.pass).collect();
            assert!(rep.pass, "k={k} t={t}: {bad:#?}");
        }
    }
}
