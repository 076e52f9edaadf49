"""Per-location omnidirectional statistics measured at 28 and 140 GHz.

Columns: condition, TX id, RX id, T-R distance (m), path loss (dB), number of
time clusters, number of subpaths, omnidirectional RMS delay spread (ns).
Rows are kept as printed in the source tables, including the repeated 6.4 m
distance of the 140 GHz TX5 rows.
"""

FIELDS = ("condition", "tx_id", "rx_id", "distance_m", "path_loss_db", "num_tc", "num_sp", "rms_ds_ns")

ROWS_28GHZ = """\
LOS,1,1,6.4,69.3,4,11,14.1
LOS,1,4,7.9,75.3,4,9,10.8
LOS,1,7,12.9,76.5,5,11,8.4
LOS,2,10,4.1,66.3,4,8,6.9
LOS,3,16,5.3,68.0,3,8,4.9
LOS,4,11,12.7,74.3,9,31,67.0
LOS,4,12,7.1,71.3,5,20,46.9
LOS,4,16,20.6,74.5,4,18,16.7
LOS,4,28,21.3,75.4,3,18,9.8
NLOS,1,2,7.8,76.6,8,33,14.4
NLOS,1,3,10.1,82.7,3,19,13.3
NLOS,1,5,11.9,84.3,3,8,4.1
NLOS,1,6,14.4,86.4,5,21,13.2
NLOS,1,8,25.9,95.9,11,16,46.0
NLOS,2,11,9.0,78.5,6,15,12.2
NLOS,2,12,28.5,89.5,9,24,49.7
NLOS,2,14,30.4,119.3,5,48,25.4
NLOS,2,15,39.2,115.8,10,57,66.0
NLOS,2,16,41.9,98.6,12,32,43.0
NLOS,2,18,12.1,93.6,7,50,26.0
NLOS,2,20,17.7,111.3,8,43,27.2
NLOS,2,21,6.7,78.0,4,9,11.3
NLOS,3,24,7.8,86.1,9,43,25.2
NLOS,3,25,8.4,76.3,4,37,15.2
NLOS,3,26,5.5,72.9,3,5,3.4
NLOS,3,27,8.3,75.8,4,17,7.0
NLOS,4,15,20.8,97.5,4,40,17.5
NLOS,4,18,33.0,96.8,12,41,46.5
NLOS,5,8,3.9,73.8,5,10,23.7
NLOS,5,19,6.9,75.3,2,13,5.8
NLOS,5,28,15.6,86.1,4,18,7.1
NLOS,5,29,15.0,81.3,6,30,31.9
NLOS,5,30,11.4,88.7,9,28,25.1
NLOS,5,31,13.9,90.4,2,14,11.4
NLOS,5,32,31.2,90.2,4,10,16.6
NLOS,5,33,9.1,97.0,7,32,32.9
"""

ROWS_140GHZ = """\
LOS,1,1,6.4,88.8,2,3,2.9
LOS,1,4,7.9,91.0,2,3,0.7
LOS,1,7,12.9,99.4,2,4,3.1
LOS,2,10,4.1,88.9,1,2,0.8
LOS,3,16,5.3,91.3,1,1,0.0
LOS,4,11,12.7,97.6,2,5,26.4
LOS,4,12,7.1,93.4,2,2,8.3
LOS,4,28,21.3,95.6,3,9,15.2
NLOS,1,2,7.8,103.2,4,5,2.9
NLOS,1,3,10.1,106.0,2,5,6.3
NLOS,1,5,11.9,105.1,1,5,1.3
NLOS,1,6,14.4,102.6,3,4,10.5
NLOS,2,11,9.0,108.0,3,4,13.0
NLOS,2,12,28.5,112.5,3,10,11.0
NLOS,2,15,39.2,114.4,5,10,23.9
NLOS,2,21,6.7,117.6,3,3,5.2
NLOS,5,28,6.4,110.5,2,3,8.0
NLOS,5,31,6.4,139.8,1,1,0.0
NLOS,5,32,6.4,117.7,4,6,16.2
NLOS,5,33,6.4,113.2,2,2,47.9
"""

# (frequency_ghz, tx_id, rx_id) -> note on a value that differs from the print
PROVENANCE = {
    (28, 1, 8): "RMS DS printed as '46..0'; stored as 46.0",
}
