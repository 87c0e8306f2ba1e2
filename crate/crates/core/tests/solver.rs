use church_core::arena::ParityGame;
use church_core::error::Error;
use church_core::gen;
use church_core::solver::{
    attractor, brute_force_solve, solve, verify_solution, Player, BRUTE_FORCE_LIMIT,
};
use rand::Rng;

fn game(owner: &[Player], succ: &[[usize; 2]], color: &[u32]) -> ParityGame {
    ParityGame::new(owner.to_vec(), succ.to_vec(), color.to_vec(), 0).unwrap()
}

#[test]
fn attractor_examples() {
    use Player::*;
    let g = game(
        &[I, II, I, II],
        &[[1, 2], [2, 3], [3, 0], [3, 3]],
        &[0, 1, 2, 3],
    );
    let (all, _) = attractor(&g, &[true; 4], I);
    assert_eq!(all, vec![true; 4]);
    let (none, _) = attractor(&g, &[false; 4], II);
    assert_eq!(none, vec![false; 4]);

    // A chain 0 → 1 → 2 → 3 owned by I, where only edge 1 moves forward.
    let chain = game(
        &[I, I, I, I],
        &[[0, 1], [1, 2], [2, 3], [3, 3]],
        &[1, 1, 1, 0],
    );
    let (set, choice) = attractor(&chain, &[false, false, false, true], I);
    assert_eq!(set, vec![true; 4]);
    assert_eq!(&choice[..3], &[Some(1), Some(1), Some(1)]);
    let (set, _) = attractor(&chain, &[false, false, false, true], II);
    assert_eq!(set, vec![false, false, false, true]);
}

#[test]
fn single_vertex_games() {
    for (c, w) in [(0, Player::II), (1, Player::I), (4, Player::II)] {
        for owner in [Player::I, Player::II] {
            let g = game(&[owner], &[[0, 0]], &[c]);
            let s = solve(&g);
            assert_eq!(s.winner, vec![w]);
            assert_eq!(brute_force_solve(&g).unwrap(), s);
            assert!(verify_solution(&g, &s));
        }
    }
}

#[test]
fn empty_game_verifies() {
    let g = ParityGame::new(vec![], vec![], vec![], 0).unwrap();
    let s = solve(&g);
    assert!(s.winner.is_empty());
    assert!(verify_solution(&g, &s));
}

#[test]
fn random_games_match_the_oracle() {
    let mut r = gen::rng(2024);
    for _ in 0..100 {
        let n = r.gen_range(1..=12);
        let g = gen::game(&mut r, n, 3);
        let s = solve(&g);
        let b = brute_force_solve(&g).unwrap();
        assert_eq!(s.winner, b.winner);
        assert!(verify_solution(&g, &s));
        assert!(verify_solution(&g, &b));
        for v in 0..n {
            assert_eq!(s.choice[v].is_some(), g.owner[v] == s.winner[v]);
        }
    }
}

#[test]
fn oracle_refuses_large_games() {
    let mut r = gen::rng(1);
    let g = gen::game(&mut r, BRUTE_FORCE_LIMIT + 1, 3);
    assert!(matches!(brute_force_solve(&g), Err(Error::TooLarge { .. })));
}

#[test]
fn flipped_strategy_edge_is_caught() {
    use Player::*;
    // II at 0 must go to the even sink 1, not the odd sink 2.
    let g = game(&[II, I, I], &[[1, 2], [1, 1], [2, 2]], &[3, 0, 1]);
    let mut s = solve(&g);
    assert_eq!(s.winner, vec![II, II, I]);
    assert_eq!(s.choice[0], Some(0));
    assert!(verify_solution(&g, &s));
    s.choice[0] = Some(1);
    assert!(!verify_solution(&g, &s));

    // Mislabelled regions are rejected as well.
    let mut t = solve(&g);
    t.winner[2] = II;
    assert!(!verify_solution(&g, &t));
}

#[test]
fn lowest_label_breaks_ties() {
    use Player::*;
    let g = game(&[II, I], &[[1, 1], [1, 1]], &[0, 0]);
    assert_eq!(solve(&g).choice[0], Some(0));
}

#[test]
fn solution_text_lists_vertices() {
    use Player::*;
    let g = game(&[II, I, I], &[[1, 2], [1, 1], [2, 2]], &[3, 0, 1]);
    let text = solve(&g).to_text();
    assert_eq!(text, "0 II 0\n1 II\n2 I 0\n");
}
