from .generators import (gen_from_2partition, gen_from_3dm, gen_from_set_cover,
                         gen_line_counterexample, gen_random_euclidean, gen_surplus_counterexample,
                         has_perfect_3dm, line_instance, planted_3dm, two_partition_value)
from .trips import (DEFAULT_BBOX, TripRecord, TripWindow, WindowSpec, available_taxis,
                    build_window, extract_pickups, haversine_matrix, ingest_trips_csv,
                    read_trip_records)
