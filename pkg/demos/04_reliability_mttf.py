#!/usr/bin/env python3
"""Estimate mean time to data loss with the birth-death Markov model:
5-year disks, 1 PB of data, 15-minute node repair for replication,
30 minutes for SRC, and RS repair growing with k."""

from srcodes.reliability import format_mttf_table, mttf_table

rows = mttf_table()
print(format_mttf_table(rows))

by_name = {r.scheme: r.system_mttf_hours for r in rows}
repl = by_name["3-way-replication"]
print(f"\n3-way replication sits near 1e9 hours ({repl:.2e}).")
print(f"SRC(50,46,2) is {by_name['SRC(50,46,2)'] / repl:,.0f}x more reliable "
      "despite using about half the storage,")
print("because a node repair finishes fast no matter how wide the code is.")
print("RS flips the other way: its repair time grows with k, so RS(50,46)")
print(f"drops below replication ({by_name['RS(50,46)']:.2e} hours).")

print("\nfaster repair pays compounding dividends:")
for minutes in (120, 60, 30, 15):
    from srcodes.reliability import MarkovParams, mttf_system

    p = MarkovParams(n=50, k=46, repair_hours=minutes / 60)
    print(f"  repair in {minutes:>3} min -> system MTTF {mttf_system(p):.2e} h")
