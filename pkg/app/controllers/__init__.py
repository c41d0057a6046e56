# Command Controllers Package
