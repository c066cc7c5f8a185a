"""Flask front end for the prescheck commands."""
