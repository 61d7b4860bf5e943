use proptest::prelude::*;
use regsep::{gen_random, parse_game, render_game, GameError, GenSpec, Letter, ParseError, Player};

#[test]
fn two_node_game() {
    let g = parse_game("parity 2; start 1; 1 even 1:2->2; 2 odd 2:1->1;").unwrap();
    assert_eq!(g.n(), 2);
    assert_eq!(g.d(), 2);
    assert_eq!(g.start(), 1);
    assert_eq!(g.owner(1), Player::Even);
    assert_eq!(g.owner(2), Player::Odd);
    assert_eq!(g.edges(), &[Letter::new(1, 2, 2), Letter::new(2, 1, 1)]);
}

#[test]
fn missing_edge_is_reported() {
    let err = parse_game("parity 2; start 1; 1 even 1:2->2; 2 odd;").unwrap_err();
    assert_eq!(err, ParseError::Game(GameError::NoOutgoingEdge(2)));
    assert_eq!(err.to_string(), "no outgoing edge: 2");
}

#[test]
fn node_priorities_move_to_edges() {
    let g = parse_game("parity 2;\n1 3 0 2,1 \"a\";\n2 2 1 1;").unwrap();
    assert_eq!(g.start(), 1);
    assert_eq!(
        g.out_edges(1),
        &[Letter::new(1, 3, 1), Letter::new(1, 3, 2)]
    );
    assert_eq!(g.out_edges(2), &[Letter::new(2, 2, 1)]);
    assert_eq!(g.owner(2), Player::Odd);
}

#[test]
fn zero_based_node_priorities_are_shifted() {
    // Node 0 becomes 1, priority 0 becomes 2: parity is kept.
    let g = parse_game("parity 1; 0 0 0 1; 1 1 1 0;").unwrap();
    assert_eq!(g.n(), 2);
    assert_eq!(g.edges(), &[Letter::new(1, 2, 2), Letter::new(2, 3, 1)]);
}

#[test]
fn short_edge_forms() {
    let a = parse_game("parity 1; start 1; 1 odd 2->1, 3:1;").unwrap();
    let b = parse_game("parity 1; start 1; 1 odd 1:2->1, 1:3->1;").unwrap();
    assert_eq!(a, b);
}

#[test]
fn syntax_errors_carry_lines() {
    let err = parse_game("parity 1;\nstart 1;\n1 sideways 1:2->1;").unwrap_err();
    assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err}");
    assert_eq!(parse_game("start 1;"), Err(ParseError::MissingHeader));
    assert_eq!(
        parse_game("parity 1; 1 even 1:2->1;"),
        Err(ParseError::MissingStart)
    );
    assert!(parse_game("parity 1; start 1; 1 even 1:2->1").is_err());
    assert_eq!(
        parse_game("parity 2; start 1; 1 even 1:2->1;"),
        Err(ParseError::Undeclared(2))
    );
    assert!(matches!(
        parse_game("parity 1; start 1; 1 even 1:0->1;"),
        Err(ParseError::Game(GameError::ZeroPriority(_)))
    ));
}

#[test]
fn comments_are_ignored() {
    let g = parse_game("# header\nparity 1; # one node\nstart 1;\n1 even 1:2->1; # loop").unwrap();
    assert_eq!(g.edge_count(), 1);
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(n in 1usize..9, d in 1u32..7, seed: u64, density in 1.0f64..3.0) {
        let g = gen_random(&GenSpec { density, ..GenSpec::new(n, d, seed) });
        prop_assert_eq!(parse_game(&render_game(&g)).unwrap(), g);
    }
}
