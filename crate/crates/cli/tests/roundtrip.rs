use jacalg_cli::ast::{BinOp, Expr, GraphForm};
use jacalg_cli::parse::parse_expr;
use jacalg_cli::print::expr_to_string;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..20).prop_map(|n| Expr::Num(n.to_string())),
        prop::sample::select(vec!["x", "y1", "dz", "ehat", "w"]).prop_map(|s| Expr::Ident(s.into())),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Wedge]);
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            prop::collection::vec(inner.clone(), 0..3).prop_map(|a| Expr::Call("d".into(), a)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Tuple),
            inner.prop_map(|e| Expr::Graph(GraphForm::Flat, Box::new(e))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printed_expressions_parse_back(e in expr()) {
        let text = expr_to_string(&e);
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{}: {}", text, err)))?;
        prop_assert_eq!(expr_to_string(&back), text.clone());
        prop_assert_eq!(parse_expr(&expr_to_string(&back)).unwrap(), back);
    }
}
