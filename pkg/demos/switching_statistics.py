"""The two-state switching process matches its closed-form statistics.

Simulates role switching alone (no motion, no opinions) for an ensemble of
agents and compares the time-shared messenger fraction and the mean stint
lengths against the analytic values m = p_m/(p_e+p_m), E[T_M] = 1/p_e and
E[T_E] = 1/p_m.

Usage: python3 demos/switching_statistics.py
"""

from __future__ import annotations

from opinionscape import DmpParams, expected_messenger_ratio, simulate_states


def main() -> None:
    print(f"{'p_e':>8} {'p_m':>8} {'ratio':>14} {'E stint':>16} "
          f"{'M stint':>16}")
    for p_e, p_m in ((0.01, 0.01), (0.003, 0.0004), (0.1, 0.01)):
        params = DmpParams(p_e=p_e, p_m=p_m)
        states = simulate_states(params, n_agents=200, t_final=30_000,
                                 master_seed=11)
        ratio = float(states.messenger_fraction.mean())
        e_stint = float(states.exploiter_sojourns.mean())
        m_stint = float(states.messenger_sojourns.mean())
        print(f"{p_e:>8} {p_m:>8} "
              f"{ratio:>6.4f} vs {expected_messenger_ratio(params):<6.4f} "
              f"{e_stint:>7.1f} vs {1 / p_m:<8.1f} "
              f"{m_stint:>7.1f} vs {1 / p_e:<8.1f}")
    print("\nEach empirical column sits beside its closed-form value.")


if __name__ == "__main__":
    main()
