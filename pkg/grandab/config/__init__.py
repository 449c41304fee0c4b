# Configuration initialization
