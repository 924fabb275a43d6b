package fixture.web;

import java.io.IOException;
import java.sql.Connection;
import java.sql.DriverManager;
import java.sql.ResultSet;
import java.sql.Statement;
import javax.servlet.ServletException;
import javax.servlet.http.*;

public class SqliServlet extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws ServletException, IOException {
        String user = request.getParameter("user");
        String query = "SELECT role FROM accounts WHERE login = '" + user + "'";
        try {
            Connection connection = DriverManager.getConnection("jdbc:h2:mem:app");
            Statement statement = connection.createStatement();
            ResultSet rows = statement.executeQuery(query);
            while (rows.next()) {
                response.getWriter().println(rows.getString(1));
            }
        } catch (Exception error) {
            response.sendError(500);
        }
    }
}
