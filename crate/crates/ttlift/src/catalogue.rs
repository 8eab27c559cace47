//! Closed list of identity ids with their required inputs. The report is
//! emitted in this order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Needs {
    Model,
    RealStructure,
    Potential,
    Cv,
    /// n_max >= 1, so descendant directions exist.
    Descendants,
    /// Real structure and n_max >= 1.
    RealDescendants,
    /// n_max >= 2.
    Level2,
}

pub struct Identity {
    pub id: &'static str,
    pub needs: Needs,
    pub description: &'static str,
}

macro_rules! ids {
    ($(($id:expr, $n:ident, $d:expr)),* $(,)?) => {
        &[$(Identity { id: $id, needs: Needs::$n, description: $d }),*]
    };
}

pub const CATALOGUE: &[Identity] = ids![
    ("small.wdvv", Model, "associativity of the Frobenius product"),
    ("small.saito.C_star", Model, "C is eta-self-adjoint"),
    ("small.saito.C_wedge_C", Model, "[C_a, C_b] = 0"),
    ("small.saito.R0_C_commute", Model, "[R0, C] = 0"),
    ("small.saito.R0_star", Model, "R0 is eta-self-adjoint"),
    ("small.saito.R_nabla", Model, "flat coordinates are flat"),
    ("small.saito.d_nabla_C", Model, "d^nabla C = 0"),
    ("small.saito.lie_eta[minus]", Model, "L_E eta + d eta"),
    ("small.saito.lie_eta[plus]", Model, "L_E eta - d eta"),
    ("small.saito.nabla_R0[minus]", Model, "nabla R0 - C + [C, Rinf]"),
    ("small.saito.nabla_R0[plus]", Model, "nabla R0 + C - [C, Rinf]"),
    ("small.saito.nabla_Rinf", Model, "Rinf is flat"),
    ("small.saito.nabla_eta", Model, "eta is flat"),
    ("small.saito.weight", Model, "Rinf* + Rinf + w Id, reported only"),
    ("small.tt.D_eta", RealStructure, "D eta"),
    ("small.tt.D_g", RealStructure, "D g"),
    ("small.tt.cv_i", Cv, "[C, U]"),
    ("small.tt.cv_ii_Q", Cv, "D Q - [C, kUk]"),
    ("small.tt.cv_ii_U", Cv, "D U + [C, Q] - C"),
    ("small.tt.cv_iii_g", Cv, "Q + Q^g"),
    ("small.tt.cv_iii_h", Cv, "Q - Q^h"),
    ("small.tt.first_tt", RealStructure, "del^D C"),
    ("small.tt.h_hermitian", RealStructure, "h is Hermitian"),
    ("small.tt.k_involution", RealStructure, "k^2 = 1"),
    ("small.tt.potential_3a", Potential, "D A - C"),
    ("small.tt.potential_3b", Potential, "D'' + [A+, C]"),
    ("small.tt.potential_3c", Potential, "Rinf + [A+, R0] is h-self-adjoint"),
    ("small.tt.potential_self_adjoint", Potential, "A is eta-self-adjoint"),
    ("small.tt.second_tt", RealStructure, "R + [C, C+]"),
    ("frame.t_closed_vs_definitional", Descendants, "closed T-frame against tau_+ W - S o tau_+ W"),
    ("frame.bracket_TT", Descendants, "[T^n a, T^m b] = 0 for n, m >= 1"),
    ("frame.bracket_T_primary", Descendants, "[T^n a, tau_0 b] = T^{n-1}(a o b)"),
    ("frame.trr[derivative]", Descendants, "T(W1) o W2 = 0, correlators by differentiation"),
    ("frame.trr[memo]", Descendants, "T(W1) o W2 = 0, correlators by recursion"),
    ("frame.product_routes", Model, "both correlator routes give the same product"),
    ("frame.string_unit", Model, "S o W = W"),
    ("frame.three_point_symmetry", Model, "primary three-point functions are symmetric"),
    ("frame.two_point_u", Model, "<<tau_0,1 tau_0,a>> = eta_ab u^b"),
    ("frame.higgs_vs_product", Model, "C_hat on primaries is the quantum product"),
    ("lift.u_restriction", Model, "u restricts to t_0"),
    ("lift.m_restriction", Model, "M restricts to the identity"),
    ("lift.m_correlator", Model, "M from three-point functions"),
    ("lift.ring_map", Model, "lift(fg) = lift(f) lift(g)"),
    ("lift.conj_commutes", Model, "lift commutes with conjugation"),
    ("lift.kill_rule", Descendants, "T(W)(f_hat) = 0"),
    ("lift.kill_rule_conj", Descendants, "conj(T(W))(f_hat) = 0"),
    ("lift.deriv_new", Model, "tau_0 a (f_hat) = lift(d_b f) M^b_a"),
    ("lift.m_derivative_q1[vector]", Descendants, "T(tau_0 b)(M^s_a) = (a o b)(u^s)"),
    ("lift.m_derivative_q1[correlator]", Descendants, "(a o b)(u^s) as a correlator"),
    ("lift.m_derivative_symmetry", Descendants, "T(tau_0 b)(M^s_a) symmetric in a, b"),
    ("lift.m_derivative_q2", Level2, "T^q(tau_0 b)(M) = 0 for q >= 2"),
    ("lift.tensor_commutator", Model, "lift of a commutator"),
    ("metric.eta_hat", Model, "eta_hat(T^n a, T^m b) = delta_nm eta_ab"),
    ("metric.eta_hat_parallel", Model, "eta_hat components are constant"),
    ("metric.h_hat_hermitian", RealStructure, "h_hat is Hermitian"),
    ("metric.chern_det", RealStructure, "closed-form D_hat satisfies the defining property"),
    ("metric.chern_closed_vs_def", RealStructure, "closed-form D_hat equals (dH H^-1)^T"),
    ("metric.curvature_transport", RealStructure, "R_hat on primaries = M conj(M) lift(R)"),
    ("metric.curvature_descendant", RealDescendants, "R_hat vanishes on descendant directions"),
    ("metric.impreuna_1", RealDescendants, "D_hat along Im T preserves eta_hat"),
    ("metric.impreuna_2", RealStructure, "D_hat eta_hat on primaries = transport of D eta"),
    ("metric.D_eta_hat", RealStructure, "D_hat eta_hat, asserted when D eta = 0"),
    ("metric.D_g_hat", RealStructure, "D_hat g_hat, asserted when D g = 0"),
    ("metric.D_g_transport", RealStructure, "D_hat g_hat = transport of D g"),
    ("saito_hat.R_nabla_hat", Model, "nabla_hat is flat"),
    ("saito_hat.nabla_hat_difference", Model, "(nabla_hat - nabla) on the T-frame"),
    ("saito_hat.d_nabla_C[primary,primary]", Model, "d^nabla_hat C_hat on primary pairs"),
    ("saito_hat.d_nabla_C[primary,descendant]", Descendants, "d^nabla_hat C_hat on mixed pairs"),
    ("saito_hat.d_nabla_C[descendant,descendant]", Descendants, "d^nabla_hat C_hat on descendant pairs"),
    ("saito_hat.C_wedge_C", Model, "[C_hat_J, C_hat_K] = 0"),
    ("saito_hat.C_star", Model, "C_hat is eta_hat-self-adjoint"),
    ("saito_hat.nabla_R0[minus]", Model, "nabla_hat R0_hat - C_hat + [C_hat, Rinf_hat]"),
    ("saito_hat.nabla_R0[plus]", Model, "nabla_hat R0_hat + C_hat - [C_hat, Rinf_hat]"),
    ("saito_hat.R0_C_commute", Model, "[R0_hat, C_hat] = 0"),
    ("saito_hat.R0_star", Model, "R0_hat is eta_hat-self-adjoint"),
    ("saito_hat.nabla_Rinf", Model, "Rinf_hat is flat"),
    ("saito_hat.weight", Model, "Rinf_hat* + Rinf_hat + w Id, reported only"),
    ("ttstar_hat.first_tt_transport", RealStructure, "del^D_hat C_hat on primaries = M M lift(del^D C)"),
    ("ttstar_hat.second_tt_transport", RealStructure, "R_hat + [C_hat, C_hat+] on primaries = M conj(M) lift(R + [C, C+])"),
    ("ttstar_hat.first_tt_descendant", RealDescendants, "del^D_hat C_hat vanishes off primary pairs"),
    ("ttstar_hat.second_tt_descendant", RealDescendants, "R_hat + [C_hat, C_hat+] vanishes off primary pairs"),
    ("ttstar_hat.first_tt", RealStructure, "lifted first tt* equation, asserted when the small one holds"),
    ("ttstar_hat.second_tt", RealStructure, "lifted second tt* equation, asserted when the small one holds"),
    ("ttstar_hat.adjoint_transport", RealStructure, "C_hat+ on primaries = conj(M) lift(C+)"),
    ("ttstar_hat.adjoint_descendant", RealDescendants, "C_hat+ vanishes on conjugated Im T"),
    ("ttstar_hat.potential_t_n_sec", Potential, "D_hat'' + [A_hat+, C_hat] = transport of the small expression"),
    ("ttstar_hat.potential_DA", Potential, "D_hat A_hat - C_hat = transport of the small expression"),
    ("ttstar_hat.potential_3a", Potential, "D_hat A_hat - C_hat"),
    ("ttstar_hat.potential_3b", Potential, "D_hat'' + [A_hat+, C_hat]"),
    ("ttstar_hat.potential_3c", Potential, "Rinf_hat + [A_hat+, R0_hat] is h_hat-self-adjoint"),
    ("ttstar_hat.potential_self_adjoint", Potential, "A_hat is eta_hat-self-adjoint"),
    ("ttstar_hat.adjoint_commutes_with_lift", Potential, "A_hat+ = lift(A+)"),
    ("ttstar_hat.cv_ii_U_transport", Cv, "D_hat U_hat + [C_hat, Q_hat] - C_hat = transport"),
    ("ttstar_hat.cv_ii_Q_transport", Cv, "D_hat Q_hat - [C_hat, kUk_hat] = transport"),
    ("ttstar_hat.cv_i", Cv, "[C_hat, U_hat]"),
    ("ttstar_hat.cv_ii_U", Cv, "D_hat U_hat + [C_hat, Q_hat] - C_hat"),
    ("ttstar_hat.cv_ii_Q", Cv, "D_hat Q_hat - [C_hat, kUk_hat]"),
    ("ttstar_hat.cv_iii_h", Cv, "Q_hat - Q_hat^h"),
    ("ttstar_hat.cv_iii_g", Cv, "Q_hat + Q_hat^g"),
    ("lax.small.lambda2", RealStructure, "C wedge C"),
    ("lax.small.lambda1", RealStructure, "del^D C"),
    ("lax.small.lambda0", RealStructure, "R + [C, C+]"),
    ("lax.small.lambda-1", RealStructure, "delbar^D C+"),
    ("lax.small.lambda-2", RealStructure, "C+ wedge C+"),
    ("lax.big.lambda2", RealStructure, "C_hat wedge C_hat"),
    ("lax.big.lambda1", RealStructure, "del^D_hat C_hat"),
    ("lax.big.lambda0", RealStructure, "R_hat + [C_hat, C_hat+]"),
    ("lax.big.lambda-1", RealStructure, "delbar^D_hat C_hat+"),
    ("lax.big.lambda-2", RealStructure, "C_hat+ wedge C_hat+"),
    ("aux.s_hat_unit", Model, "S_hat is the unit of the diamond product"),
    ("aux.diamond_eta", Model, "eta_hat(X <> Y, Z) = eta_hat(X, Y <> Z)"),
    ("aux.degenerate_pairing_T", Descendants, "the degenerate pairing kills Im T"),
    ("aux.s_circ_s_small", Model, "S o S restricts to the unit"),
];

pub fn find(id: &str) -> Option<&'static Identity> {
    CATALOGUE.iter().find(|i| i.id == id)
}
