"""
Sweeping the backhaul capacity
==============================

Run a small sweep, print the mean throughput per algorithm, and write the
CSV and gnuplot files the command line tool would produce.
"""
import sys

from fiwicache import GeneratorConfig
from fiwicache.experiments import SweepSpec, gnuplot_data, rows_to_csv, run_sweep, summarize

spec = SweepSpec('backhaul_capacity', (0.25e9, 0.5e9, 1.0e9, 2.0e9),
                 seeds=(0, 1), base=GeneratorConfig(num_aps=8, mean_snr_ref_db=30.0))
rows = run_sweep(spec, threads=2)

###############################################################################
# Mean over seeds.

print(f"{'C [Gbps]':>9} " + ' '.join(f'{a:>12}' for a in spec.algorithms))
summary = summarize(rows)
for value in spec.values:
    cells = {s['algorithm']: s['throughput_bps_mean'] for s in summary
             if s['axis_value'] == value}
    print(f"{value / 1e9:9.3f} " + ' '.join(f"{cells[a] / 1e9:12.4f}" for a in spec.algorithms))

###############################################################################
# Raw rows and a gnuplot file, if an output prefix is given.

if len(sys.argv) > 1:
    with open(sys.argv[1] + '.csv', 'w') as fh:
        fh.write(rows_to_csv(rows))
    with open(sys.argv[1] + '.dat', 'w') as fh:
        fh.write(gnuplot_data(rows, spec.axis))
