# Ordinal-RL Toolkit Package
